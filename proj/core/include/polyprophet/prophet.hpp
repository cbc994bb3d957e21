#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <vector>

#include "polyprophet/block_matroid.hpp"
#include "polyprophet/distribution.hpp"

namespace polyprophet {

inline constexpr double kInfiniteThreshold = std::numeric_limits<double>::infinity();

// How the expectations over the independent second draw w' are realized.
struct ThresholdEstimator {
  EstimatorMode mode = EstimatorMode::kExact;
  int pool_size = 4096;  // Monte-Carlo sample pool per trial
  bool cache = true;     // memoize per-cardinality-vector g values
};

// Test hook: corrupts the thresholds the algorithm uses so the verification
// suite can demonstrate it catches a broken implementation.
enum class ThresholdMutation { kNone, kHalve };

// A weighted set of w' scenarios (per-block weights). Exact mode carries the
// full joint support of the block distributions; Monte-Carlo mode carries an
// equally weighted sample pool.
class WPrimeEnsemble {
 public:
  static WPrimeEnsemble exact(const std::vector<DistributionSpec>& dists,
                              std::size_t cap = kDefaultEnumerationCap);
  static WPrimeEnsemble monte_carlo(const std::vector<DistributionSpec>& dists,
                                    int pool_size, RandomSource rng);
  // Equally weighted explicit scenarios (e.g. a transformed sample pool).
  static WPrimeEnsemble from_scenarios(std::vector<std::vector<double>> scenarios);

  std::size_t size() const { return scenarios_.size(); }
  const std::vector<double>& scenario(std::size_t k) const { return scenarios_[k]; }
  double prob(std::size_t k) const { return probs_[k]; }

 private:
  std::vector<std::vector<double>> scenarios_;
  std::vector<double> probs_;
};

// Computes the algorithm's thresholds
//   T(A, b) = 1/2 * E[ g(A) - g(A + e_b) ]          (finite case)
//   T(A, b) = +inf                                   when A + e_b leaves P_f
// over a fixed w' ensemble, memoizing the per-scenario g vectors by
// cardinality vector. Also produces the within-block surrogate chains, which
// use the same g machinery on the unconditional chain from the block start.
// Not thread-safe: use one oracle per worker.
class ThresholdOracle {
 public:
  ThresholdOracle(const BlockMatroid& matroid, WPrimeEnsemble ensemble,
                  ThresholdMutation mutation = ThresholdMutation::kNone,
                  bool cache = true);

  double threshold(const CardinalityVector& A, int block);

  // Surrogate thresholds t_1..t_M for the whole block, computed on the chain
  // A, A+e_b, A+2e_b, ...; entries past the last feasible addition are +inf.
  std::vector<double> surrogate_chain(const CardinalityVector& A, int block);

  // E[g(A)] and E[w'(C(A))] = E[w'(B) - w'(R(A))] over the ensemble; used by
  // the identity checks.
  double expected_g(const CardinalityVector& A);
  double expected_complement_weight(const CardinalityVector& A);

  const BlockMatroid& matroid() const { return matroid_; }
  const WPrimeEnsemble& ensemble() const { return ensemble_; }
  ThresholdMutation mutation() const { return mutation_; }

 private:
  const std::vector<double>& g_vector(const CardinalityVector& A);
  double apply_mutation(double t) const;

  const BlockMatroid& matroid_;
  WPrimeEnsemble ensemble_;
  ThresholdMutation mutation_;
  bool cache_enabled_;
  std::map<CardinalityVector, std::vector<double>> g_cache_;
  PolymatroidSlack scratch_;
  // With caching off, the two most recent g_vector results stay valid.
  std::vector<double> uncached_[2];
  int uncached_slot_ = 0;
};

struct TraceStep {
  int block = 0;
  int copy = 0;
  double threshold = 0.0;  // T_i, +inf sentinel when the addition is dependent
  double surrogate = 0.0;  // t_i from the block-start chain
  double weight = 0.0;     // presented weight w_i
  bool selected = false;
  CardinalityVector cvec_after;  // counts of A_i
};

struct AlgorithmTrace {
  std::vector<TraceStep> steps;
  std::vector<int> block_order;                     // blocks in presentation order
  std::vector<CardinalityVector> block_start_cvec;  // A at the start of each block
};

// Supplies the next block id given the revealed history. Implemented by the
// adversary policies in adversary.hpp.
class BlockOrderSource {
 public:
  virtual ~BlockOrderSource() = default;
  // presented/weights are parallel: blocks already fully presented and their
  // revealed weights (blocks of size zero reveal nothing).
  virtual int next_block(const std::vector<int>& presented,
                         const std::vector<double>& revealed_weights) = 0;
};

struct MatroidRunResult {
  CardinalityVector selected;
  double weight = 0.0;  // dot(w, selected counts), ascending block order
  AlgorithmTrace trace;
};

// The threshold selection algorithm on the block matroid: per presented copy,
// select iff w_i >= T_i. Deterministic given (w, oracle).
MatroidRunResult run_matroid(const BlockMatroid& m, const std::vector<double>& w,
                             BlockOrderSource& order, ThresholdOracle& oracle);

// Variant with a separate acceptance vector: selection compares
// accept[block] >= T while values and traces use w. The posted-price revenue
// mechanism passes unclipped virtual values here so agents below reserve
// decline zero-threshold units.
MatroidRunResult run_matroid_with_acceptance(const BlockMatroid& m,
                                             const std::vector<double>& w,
                                             const std::vector<double>& accept,
                                             BlockOrderSource& order,
                                             ThresholdOracle& oracle);

// Same algorithm driven by an explicit copy-level sequence; validates that
// every copy appears exactly once and blocks are consecutive, throwing
// AdversaryContractViolation otherwise.
MatroidRunResult run_matroid_sequence(const BlockMatroid& m, const std::vector<double>& w,
                                      const std::vector<CopyRef>& sequence,
                                      ThresholdOracle& oracle);

struct PolymatroidRunResult {
  Allocation z;
  double objective = 0.0;  // dot(w, z), equals the internal matroid weight
  MatroidRunResult matroid;
};

// Online selection over P_f: reduces to the block matroid by presenting the
// copies of element u_i consecutively with weight w_i and setting
// z_i = number of selected copies.
PolymatroidRunResult run_polymatroid(const BlockMatroid& m, const std::vector<double>& w,
                                     BlockOrderSource& order, ThresholdOracle& oracle);

// Single-item baselines. Both select the first element (in `order`) whose
// weight is >= the rule's threshold; value 0 if none qualifies.
double kw_threshold(const std::vector<DistributionSpec>& dists, const Estimator& est,
                    RandomSource* rng = nullptr);
// Smallest T with P(max_i w_i > T) <= 1/2. Exact scan for all-discrete
// inputs, bisection otherwise.
double samuel_cahn_threshold(const std::vector<DistributionSpec>& dists);

double single_item_run(const WeightAssignment& w, const std::vector<int>& order,
                       double threshold);

}  // namespace polyprophet
