#include "polyprophet/polymatroid.hpp"

#include <algorithm>
#include <numeric>

namespace polyprophet {

bool is_member(const SubmodularSpec& f, const Allocation& z) {
  const int n = f.n();
  if (static_cast<int>(z.size()) != n) {
    throw PreconditionError("allocation size does not match ground set");
  }
  if (n > 24) throw TooLarge("membership enumeration capped at n = 24");
  for (int64_t zi : z) {
    if (zi < 0) return false;
  }
  const uint32_t full = 1u << n;
  for (uint32_t mask = 1; mask < full; ++mask) {
    int64_t sum = 0;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) sum += z[i];
    }
    if (sum > f.evaluate(mask)) return false;
  }
  return true;
}

MaxResult greedy_max(const SubmodularSpec& f, const WeightAssignment& w) {
  const int n = f.n();
  if (static_cast<int>(w.size()) != n) {
    throw PreconditionError("weight vector size does not match ground set");
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  // weight descending, ties by ascending element index
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return w[a] > w[b]; });

  MaxResult result;
  result.z.assign(n, 0);
  uint32_t prefix = 0;
  for (int idx : order) {
    const int64_t before = f.evaluate(prefix);
    prefix |= (1u << idx);
    result.z[idx] = f.evaluate(prefix) - before;
  }
  double objective = 0.0;
  for (int i = 0; i < n; ++i) objective += w[i] * static_cast<double>(result.z[i]);
  result.objective = objective;
  return result;
}

MaxResult brute_force_max(const SubmodularSpec& f, const WeightAssignment& w) {
  const int n = f.n();
  if (static_cast<int>(w.size()) != n) {
    throw PreconditionError("weight vector size does not match ground set");
  }
  if (n > 6) throw TooLarge("brute_force_max capped at n = 6");
  if (f.total_value() > 8) throw TooLarge("brute_force_max capped at f(U) = 8");

  const std::vector<int64_t> caps = f.singleton_caps();
  Allocation z(n, 0);
  MaxResult best;
  best.z.assign(n, 0);
  best.objective = 0.0;

  // odometer over 0 <= z_i <= f({i})
  for (;;) {
    if (is_member(f, z)) {
      double obj = 0.0;
      for (int i = 0; i < n; ++i) obj += w[i] * static_cast<double>(z[i]);
      if (obj > best.objective) {
        best.objective = obj;
        best.z = z;
      }
    }
    int pos = 0;
    while (pos < n) {
      if (++z[pos] <= caps[pos]) break;
      z[pos] = 0;
      ++pos;
    }
    if (pos == n) break;
  }
  return best;
}

}  // namespace polyprophet
