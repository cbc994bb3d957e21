#pragma once

#include <cstdint>
#include <vector>

#include "polyprophet/adversary.hpp"
#include "polyprophet/distribution.hpp"
#include "polyprophet/harness.hpp"
#include "polyprophet/prophet.hpp"

namespace polyprophet {

// phi(v) = v - (1 - F(v)) / f(v) for the supported regular families:
//   Uniform(a, b):   2v - b
//   Exponential(l):  v - 1/l
// Throws UnsupportedFamily otherwise.
double virtual_value(const DistributionSpec& dist, double v);

// Inverse of phi on its increasing branch.
double inverse_virtual_value(const DistributionSpec& dist, double phi);

struct MechanismOutcome {
  std::vector<double> allocation;  // units of service per agent (original scale)
  std::vector<double> payments;
  double welfare = 0.0;  // sum v_i * x_i
  double revenue = 0.0;  // sum p_i
};

// One realization of the sequential posted-price mechanism maximizing
// welfare: runs the online polymatroid algorithm on the true values; the
// price menu for an agent is its block's surrogate threshold sequence, so a
// utility maximizer buys exactly the algorithm's prefix.
MechanismOutcome posted_price_welfare(const BlockMatroid& m,
                                      const std::vector<double>& values,
                                      BlockOrderSource& order, ThresholdOracle& oracle);

struct RevenueOutcome {
  MechanismOutcome outcome;
  double virtual_surplus = 0.0;   // of the sold allocation
  double benchmark_draw = 0.0;    // optimal virtual surplus for this draw
};

// Revenue variant: thresholds are computed for the clipped virtual weights
// phi^+(v); unit k of agent i is offered at price phi_i^{-1}(t_k) and the
// agent buys the longest affordable prefix. The benchmark is the optimal
// expected virtual surplus, an upper bound on optimal revenue.
RevenueOutcome posted_price_revenue(const BlockMatroid& m,
                                    const std::vector<DistributionSpec>& value_dists,
                                    const std::vector<double>& values,
                                    BlockOrderSource& order, ThresholdOracle& oracle);

struct MechanismReport {
  int64_t trials = 0;
  uint64_t seed = 0;
  MechanismObjective objective = MechanismObjective::kWelfare;
  SummaryStats alg;        // welfare or revenue, per objective
  SummaryStats benchmark;  // E[OPT welfare] or E[opt virtual surplus]
  SummaryStats margin;     // alg - benchmark/2
  double ratio = 0.0;
  double ratio_se = 0.0;
  double ci_lo = 0.0, ci_hi = 0.0;
  bool guarantee_pass = false;  // margin.mean >= -3 * margin.se
  SummaryStats revenue;         // payments collected (both objectives)
  // Best-response audit: on sampled trials, enumerate every feasible
  // purchase quantity against the offered menu; truthful prefix must maximize
  // agent utility.
  int64_t best_response_checks = 0;
  int64_t best_response_failures = 0;
  bool ir_ok = true;  // every agent's utility >= 0 in every audited trial
};

MechanismReport run_mechanism(const ExperimentConfig& config, int jobs = 1);

}  // namespace polyprophet
