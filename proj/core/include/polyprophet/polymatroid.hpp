#pragma once

#include <cstdint>
#include <vector>

#include "polyprophet/distribution.hpp"
#include "polyprophet/submodular.hpp"

namespace polyprophet {

// Integer allocation vector, one coordinate per ground-set element.
using Allocation = std::vector<int64_t>;

// Membership in P_f = { z >= 0 : sum_{i in S} z_i <= f(S) for all S }.
// Full subset enumeration; throws TooLarge for n > 24.
bool is_member(const SubmodularSpec& f, const Allocation& z);

struct MaxResult {
  Allocation z;
  double objective = 0.0;
};

// Edmonds' greedy: sort elements by weight descending (ties by ascending
// element index), give each its marginal value along the sorted prefix.
// Returns an optimal vertex of P_f for monotone f and non-negative weights.
MaxResult greedy_max(const SubmodularSpec& f, const WeightAssignment& w);

// Independent oracle: exhaustive search over integer vectors
// 0 <= z_i <= f({i}). Valid as optimum because an integer polymatroid has an
// integral optimal vertex. Requires n <= 6 and f(U) <= 8.
MaxResult brute_force_max(const SubmodularSpec& f, const WeightAssignment& w);

}  // namespace polyprophet
