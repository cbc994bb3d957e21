#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polyprophet/adversary.hpp"
#include "polyprophet/distribution.hpp"
#include "polyprophet/prophet.hpp"
#include "polyprophet/statistics.hpp"
#include "polyprophet/submodular.hpp"

namespace polyprophet {

enum class RunMode { kExperiment, kVerify, kMechanism };
enum class MechanismObjective { kWelfare, kRevenue };

struct ExperimentConfig {
  RunMode mode = RunMode::kExperiment;
  SubmodularSpec submodular;
  std::vector<DistributionSpec> distributions;  // one per ground-set element
  AdversarySpec adversary;
  ThresholdEstimator estimator;
  int64_t trials = 10'000;
  uint64_t seed = 1;
  std::size_t enumeration_cap = kDefaultEnumerationCap;
  // verify mode
  int fuzz_budget = 1000;
  ThresholdMutation mutation = ThresholdMutation::kNone;
  // mechanism mode
  MechanismObjective objective = MechanismObjective::kWelfare;
};

// Throws ValidationError on any inconsistency (sizes, trial count, estimator
// vs distribution kinds, adversary order, ...).
void validate_config(const ExperimentConfig& config);

struct ExperimentReport {
  int64_t trials = 0;
  uint64_t seed = 0;
  SummaryStats alg;
  SummaryStats opt;
  // margin = alg - opt/2 per trial; the guarantee E[ALG] >= OPT/2 is
  // equivalent to E[margin] >= 0.
  SummaryStats margin;
  double ratio = 0.0;  // mean alg / mean opt
  double ratio_se = 0.0;
  double ci_lo = 0.0;  // 95% CI for the ratio, normal approximation
  double ci_hi = 0.0;
  bool guarantee_pass = false;  // margin.mean >= -3 * margin.se
  // Per-trial cross-checks of the polymatroid<->matroid reduction.
  bool reduction_objective_exact = false;  // objective == internal matroid weight
  double reduction_opt_max_err = 0.0;      // |matroid OPT - polymatroid OPT|
  bool reduction_opt_ok = false;           // max err <= 1e-9
};

// Monte-Carlo estimate of E[ALG] vs E[OPT]: per trial, sample w, run the
// online algorithm against the adversary, and compute OPT by greedy_max on
// the same draw. Deterministic given (config, seed) regardless of jobs.
ExperimentReport run_experiment(const ExperimentConfig& config, int jobs = 1);

struct PropertyResult {
  std::string name;
  int64_t checks = 0;
  int64_t failures = 0;
  std::string counterexample;  // first failure, replayable: instance seed + draw
  bool pass() const { return failures == 0; }
};

struct PropertyReport {
  std::vector<PropertyResult> properties;
  int instances = 0;
  bool all_pass = true;
  const PropertyResult* find(const std::string& name) const;
};

// Runs the structural property suite on the configured instance plus
// `budget` fuzzed instances (n <= 4, supports <= 3, exact estimator).
// Failures are data, not errors.
PropertyReport verify_properties(const ExperimentConfig& config, int budget, int jobs = 1);

// A fuzzed exact-mode instance: small polymatroid + discrete distributions +
// adversary, deterministic in (seed, index). Exposed for the test suites.
ExperimentConfig fuzz_instance(uint64_t seed, int index);

}  // namespace polyprophet
