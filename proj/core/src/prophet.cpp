#include "polyprophet/prophet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace polyprophet {

WPrimeEnsemble WPrimeEnsemble::exact(const std::vector<DistributionSpec>& dists,
                                     std::size_t cap) {
  WPrimeEnsemble e;
  for (const auto& pt : enumerate_support(dists, cap)) {
    e.scenarios_.push_back(pt.weights);
    e.probs_.push_back(pt.prob);
  }
  return e;
}

WPrimeEnsemble WPrimeEnsemble::monte_carlo(const std::vector<DistributionSpec>& dists,
                                           int pool_size, RandomSource rng) {
  if (pool_size < 1) throw ValidationError("Monte-Carlo pool size must be >= 1");
  WPrimeEnsemble e;
  e.scenarios_.reserve(pool_size);
  const double p = 1.0 / static_cast<double>(pool_size);
  for (int k = 0; k < pool_size; ++k) {
    e.scenarios_.push_back(sample_assignment(dists, rng));
    e.probs_.push_back(p);
  }
  return e;
}

WPrimeEnsemble WPrimeEnsemble::from_scenarios(std::vector<std::vector<double>> scenarios) {
  if (scenarios.empty()) throw ValidationError("ensemble needs at least one scenario");
  WPrimeEnsemble e;
  const double p = 1.0 / static_cast<double>(scenarios.size());
  e.probs_.assign(scenarios.size(), p);
  e.scenarios_ = std::move(scenarios);
  return e;
}

ThresholdOracle::ThresholdOracle(const BlockMatroid& matroid, WPrimeEnsemble ensemble,
                                 ThresholdMutation mutation, bool cache)
    : matroid_(matroid),
      ensemble_(std::move(ensemble)),
      mutation_(mutation),
      cache_enabled_(cache),
      scratch_(matroid.value_table(), matroid.num_blocks()) {
  for (std::size_t k = 0; k < ensemble_.size(); ++k) {
    if (static_cast<int>(ensemble_.scenario(k).size()) != matroid_.num_blocks()) {
      throw PreconditionError("w' scenario size does not match block count");
    }
  }
}

double ThresholdOracle::apply_mutation(double t) const {
  if (mutation_ == ThresholdMutation::kHalve && std::isfinite(t)) return 0.5 * t;
  return t;
}

// Per-scenario g(A) = w'(R(A)), computed by the chunked spanning greedy:
// blocks in decreasing w' (ties by index), each absorbing as many copies as
// the slack allows. Memoized by cardinality vector when caching is on;
// otherwise the two most recent results stay valid (alternating slots).
const std::vector<double>& ThresholdOracle::g_vector(const CardinalityVector& A) {
  if (cache_enabled_) {
    auto it = g_cache_.find(A);
    if (it != g_cache_.end()) return it->second;
  }

  const int n = matroid_.num_blocks();
  const auto& sizes = matroid_.block_sizes();
  std::vector<double> g(ensemble_.size(), 0.0);
  std::vector<int> order(n);
  for (std::size_t k = 0; k < ensemble_.size(); ++k) {
    const std::vector<double>& wp = ensemble_.scenario(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return wp[a] > wp[b]; });
    scratch_.reset(A);
    double value = 0.0;
    for (int b : order) {
      const int64_t room = sizes[b] - A[b];
      const int64_t take = std::min(room, scratch_.max_addable(b));
      if (take > 0) {
        scratch_.add(b, take);
        value += wp[b] * static_cast<double>(take);
      }
    }
    g[k] = value;
  }

  if (cache_enabled_) {
    return g_cache_.emplace(A, std::move(g)).first->second;
  }
  uncached_slot_ ^= 1;
  uncached_[uncached_slot_] = std::move(g);
  return uncached_[uncached_slot_];
}

double ThresholdOracle::threshold(const CardinalityVector& A, int block) {
  CardinalityVector next = A;
  ++next[block];
  if (!matroid_.within_bounds(next) || !matroid_.is_independent(next)) {
    return kInfiniteThreshold;
  }
  const std::vector<double>& g_a = g_vector(A);
  const std::vector<double>& g_next = g_vector(next);
  double acc = 0.0;
  for (std::size_t k = 0; k < ensemble_.size(); ++k) {
    acc += ensemble_.prob(k) * (g_a[k] - g_next[k]);
  }
  return apply_mutation(0.5 * acc);
}

std::vector<double> ThresholdOracle::surrogate_chain(const CardinalityVector& A, int block) {
  if (A[block] != 0) {
    throw PreconditionError("surrogate chain requires the block to be unprocessed");
  }
  if (!matroid_.is_independent(A)) {
    throw PreconditionError("surrogate chain requires an independent start set");
  }
  const int m = matroid_.block_size(block);
  std::vector<double> out(m, kInfiniteThreshold);
  CardinalityVector current = A;
  for (int k = 0; k < m; ++k) {
    const double t = threshold(current, block);
    if (!std::isfinite(t)) break;  // dependent from here on
    out[k] = t;
    ++current[block];
  }
  return out;
}

double ThresholdOracle::expected_g(const CardinalityVector& A) {
  const std::vector<double>& g_a = g_vector(A);
  double acc = 0.0;
  for (std::size_t k = 0; k < ensemble_.size(); ++k) acc += ensemble_.prob(k) * g_a[k];
  return acc;
}

double ThresholdOracle::expected_complement_weight(const CardinalityVector& A) {
  // w'(C(A)) = w'(B) - w'(R(A)) and w'(B) = g(empty set).
  std::vector<double> g_zero = g_vector(matroid_.zero_vector());
  const std::vector<double>& g_a = g_vector(A);
  double acc = 0.0;
  for (std::size_t k = 0; k < ensemble_.size(); ++k) {
    acc += ensemble_.prob(k) * (g_zero[k] - g_a[k]);
  }
  return acc;
}

namespace {

void check_weights(const std::vector<double>& w, int n) {
  if (static_cast<int>(w.size()) != n) {
    throw PreconditionError("weight vector size does not match block count");
  }
  for (double x : w) {
    if (!std::isfinite(x) || x < 0.0) {
      throw PreconditionError("weights must be finite and non-negative");
    }
  }
}

double dot_counts(const std::vector<double>& w, const CardinalityVector& c) {
  double acc = 0.0;
  for (std::size_t b = 0; b < c.size(); ++b) acc += w[b] * static_cast<double>(c[b]);
  return acc;
}

// Shared engine: `accept` drives selection (normally the presented weights;
// the posted-price revenue mechanism passes unclipped virtual values so an
// agent below reserve declines zero-threshold units).
MatroidRunResult run_blocks(const BlockMatroid& m, const std::vector<double>& w,
                            const std::vector<double>& accept,
                            const std::vector<std::pair<int, std::vector<int>>>& runs,
                            ThresholdOracle& oracle) {
  MatroidRunResult result;
  CardinalityVector A = m.zero_vector();
  for (const auto& [block, copies] : runs) {
    result.trace.block_order.push_back(block);
    result.trace.block_start_cvec.push_back(A);
    const std::vector<double> tvec = oracle.surrogate_chain(A, block);
    for (std::size_t k = 0; k < copies.size(); ++k) {
      TraceStep step;
      step.block = block;
      step.copy = copies[k];
      step.threshold = oracle.threshold(A, block);
      step.surrogate = tvec[k];
      step.weight = w[block];
      step.selected = accept[block] >= step.threshold;
      if (step.selected) ++A[block];
      step.cvec_after = A;
      result.trace.steps.push_back(std::move(step));
    }
  }
  result.selected = A;
  result.weight = dot_counts(w, A);
  return result;
}

std::vector<int> iota_copies(int count) {
  std::vector<int> v(count);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

}  // namespace

MatroidRunResult run_matroid_with_acceptance(const BlockMatroid& m,
                                             const std::vector<double>& w,
                                             const std::vector<double>& accept,
                                             BlockOrderSource& order,
                                             ThresholdOracle& oracle) {
  const int n = m.num_blocks();
  check_weights(w, n);
  if (static_cast<int>(accept.size()) != n) {
    throw PreconditionError("acceptance vector size mismatch");
  }

  std::vector<int> presented;
  std::vector<double> revealed;
  std::vector<bool> seen(n, false);
  std::vector<std::pair<int, std::vector<int>>> runs;
  for (int s = 0; s < n; ++s) {
    const int block = order.next_block(presented, revealed);
    if (block < 0 || block >= n) {
      throw AdversaryContractViolation("adversary chose a block out of range");
    }
    if (seen[block]) {
      throw AdversaryContractViolation("adversary repeated a block");
    }
    seen[block] = true;
    runs.emplace_back(block, iota_copies(m.block_size(block)));
    presented.push_back(block);
    // A block with no copies presents no elements, so its weight stays hidden.
    revealed.push_back(m.block_size(block) > 0 ? w[block]
                                               : std::numeric_limits<double>::quiet_NaN());
  }
  return run_blocks(m, w, accept, runs, oracle);
}

MatroidRunResult run_matroid(const BlockMatroid& m, const std::vector<double>& w,
                             BlockOrderSource& order, ThresholdOracle& oracle) {
  const int n = m.num_blocks();
  check_weights(w, n);
  return run_matroid_with_acceptance(m, w, w, order, oracle);
}

MatroidRunResult run_matroid_sequence(const BlockMatroid& m, const std::vector<double>& w,
                                      const std::vector<CopyRef>& sequence,
                                      ThresholdOracle& oracle) {
  const int n = m.num_blocks();
  check_weights(w, n);
  if (static_cast<int>(sequence.size()) != m.ground_size()) {
    throw AdversaryContractViolation("sequence must present every copy exactly once");
  }

  std::vector<std::pair<int, std::vector<int>>> runs;
  std::vector<bool> block_done(n, false);
  for (const CopyRef& ref : sequence) {
    if (ref.block < 0 || ref.block >= n || ref.copy < 0 ||
        ref.copy >= m.block_size(ref.block)) {
      throw AdversaryContractViolation("sequence names a copy outside the ground set");
    }
    if (runs.empty() || runs.back().first != ref.block) {
      if (block_done[ref.block]) {
        throw AdversaryContractViolation("block copies must appear consecutively");
      }
      block_done[ref.block] = true;
      runs.emplace_back(ref.block, std::vector<int>{});
    }
    runs.back().second.push_back(ref.copy);
  }
  for (const auto& [block, copies] : runs) {
    std::vector<int> sorted = copies;
    std::sort(sorted.begin(), sorted.end());
    for (int k = 0; k < static_cast<int>(sorted.size()); ++k) {
      if (sorted[k] != k) {
        throw AdversaryContractViolation("sequence repeats or omits a copy");
      }
    }
    if (static_cast<int>(copies.size()) != m.block_size(block)) {
      throw AdversaryContractViolation("sequence splits a block");
    }
  }
  if (static_cast<int>(runs.size()) != std::count_if(block_done.begin(), block_done.end(),
                                                     [](bool b) { return b; })) {
    throw AdversaryContractViolation("block copies must appear consecutively");
  }
  return run_blocks(m, w, w, runs, oracle);
}

PolymatroidRunResult run_polymatroid(const BlockMatroid& m, const std::vector<double>& w,
                                     BlockOrderSource& order, ThresholdOracle& oracle) {
  PolymatroidRunResult result;
  result.matroid = run_matroid(m, w, order, oracle);
  result.z.assign(result.matroid.selected.begin(), result.matroid.selected.end());
  // Same dot-product expression as the matroid weight, so the two agree
  // bit for bit.
  result.objective = dot_counts(w, result.matroid.selected);
  return result;
}

double kw_threshold(const std::vector<DistributionSpec>& dists, const Estimator& est,
                    RandomSource* rng) {
  return expected_max(dists, est, rng) / 2.0;
}

double samuel_cahn_threshold(const std::vector<DistributionSpec>& dists) {
  if (dists.empty()) throw ValidationError("samuel_cahn_threshold: no distributions");
  const auto pr_max_gt = [&](double t) {
    double cdf_prod = 1.0;
    for (const auto& d : dists) cdf_prod *= d.cdf(t);
    return 1.0 - cdf_prod;
  };

  bool all_discrete = true;
  for (const auto& d : dists) all_discrete &= d.is_discrete();
  if (all_discrete) {
    std::vector<double> candidates{0.0};
    for (const auto& d : dists) {
      for (const auto& a : d.atoms()) candidates.push_back(a.value);
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    for (double t : candidates) {
      if (pr_max_gt(t) <= 0.5) return t;
    }
    return candidates.back();
  }

  double hi = 1.0;
  while (pr_max_gt(hi) > 0.5) hi *= 2.0;
  double lo = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (pr_max_gt(mid) <= 0.5) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double single_item_run(const WeightAssignment& w, const std::vector<int>& order,
                       double threshold) {
  if (order.size() != w.size()) {
    throw PreconditionError("order must cover every element");
  }
  for (int i : order) {
    if (i < 0 || i >= static_cast<int>(w.size())) {
      throw PreconditionError("order index out of range");
    }
    if (w[i] >= threshold) return w[i];
  }
  return 0.0;
}

}  // namespace polyprophet
