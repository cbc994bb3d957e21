#pragma once

#include <cstdint>
#include <vector>

#include "polyprophet/errors.hpp"
#include "polyprophet/random.hpp"

namespace polyprophet {

// Rewards are unitless non-negative reals.
using Weight = double;

// One realized weight per ground-set element, indexed by element id.
using WeightAssignment = std::vector<Weight>;

enum class DistKind { kDiscrete, kUniform, kExponential };

struct DiscreteAtom {
  double value = 0.0;
  double prob = 0.0;
  bool operator==(const DiscreteAtom&) const = default;
};

// Per-element weight distribution. All variants have finite mean, which
// guarantees a finite expected maximum.
class DistributionSpec {
 public:
  // Atoms are stored sorted by value; probabilities must sum to 1 within
  // 1e-12 and values must be distinct and non-negative.
  static DistributionSpec discrete(std::vector<DiscreteAtom> atoms);
  static DistributionSpec point_mass(double value);
  static DistributionSpec uniform(double lo, double hi);
  static DistributionSpec exponential(double rate);

  DistKind kind() const { return kind_; }
  bool is_discrete() const { return kind_ == DistKind::kDiscrete; }

  const std::vector<DiscreteAtom>& atoms() const;  // discrete only
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double rate() const { return rate_; }

  double mean() const;
  // Smallest v with P(X <= v) >= 1/2.
  double median() const;
  double cdf(double x) const;

  double sample(RandomSource& rng) const;

  bool operator==(const DistributionSpec&) const = default;

 private:
  DistributionSpec() = default;

  DistKind kind_ = DistKind::kDiscrete;
  std::vector<DiscreteAtom> atoms_;
  double lo_ = 0.0, hi_ = 0.0;
  double rate_ = 1.0;
};

// Independent draws, one per element. Pure function of (dists, rng state).
WeightAssignment sample_assignment(const std::vector<DistributionSpec>& dists,
                                   RandomSource& rng);

struct SupportPoint {
  WeightAssignment weights;
  double prob = 0.0;
};

inline constexpr std::size_t kDefaultEnumerationCap = 1'000'000;

// All joint outcomes of a list of discrete distributions with product
// probabilities, in lexicographic order of atom indices. Throws
// UnsupportedExact for continuous variants, TooLarge past the cap.
std::vector<SupportPoint> enumerate_support(
    const std::vector<DistributionSpec>& dists,
    std::size_t cap = kDefaultEnumerationCap);

enum class EstimatorMode { kExact, kMonteCarlo };

struct Estimator {
  EstimatorMode mode = EstimatorMode::kExact;
  int64_t samples = 100'000;  // Monte-Carlo only
};

// E[max_i w_i]. Exact mode enumerates joint support (discrete only) and is
// bit-reproducible; Monte-Carlo mode draws `samples` assignments from rng.
Weight expected_max(const std::vector<DistributionSpec>& dists,
                    const Estimator& est, RandomSource* rng = nullptr,
                    std::size_t cap = kDefaultEnumerationCap);

}  // namespace polyprophet
