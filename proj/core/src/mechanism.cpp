#include "polyprophet/mechanism.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <thread>

#include "polyprophet/polymatroid.hpp"

namespace polyprophet {

double virtual_value(const DistributionSpec& dist, double v) {
  switch (dist.kind()) {
    case DistKind::kUniform:
      return 2.0 * v - dist.hi();
    case DistKind::kExponential:
      return v - 1.0 / dist.rate();
    case DistKind::kDiscrete:
      break;
  }
  throw UnsupportedFamily("virtual values need a uniform or exponential distribution");
}

double inverse_virtual_value(const DistributionSpec& dist, double phi) {
  switch (dist.kind()) {
    case DistKind::kUniform:
      return 0.5 * (phi + dist.hi());
    case DistKind::kExponential:
      return phi + 1.0 / dist.rate();
    case DistKind::kDiscrete:
      break;
  }
  throw UnsupportedFamily("virtual values need a uniform or exponential distribution");
}

namespace {

// Welfare-mode outcome: price of a unit is the threshold it cleared; values
// are per scaled unit, allocations reported in original service units.
MechanismOutcome welfare_outcome(const BlockMatroid& m, const std::vector<double>& values,
                                 const MatroidRunResult& run) {
  const int n = m.num_blocks();
  const double scale = static_cast<double>(m.spec().scale());
  MechanismOutcome out;
  out.allocation.assign(n, 0.0);
  out.payments.assign(n, 0.0);
  for (int b = 0; b < n; ++b) {
    out.allocation[b] = static_cast<double>(run.selected[b]) / scale;
    out.welfare += values[b] * static_cast<double>(run.selected[b]);
  }
  for (const auto& step : run.trace.steps) {
    if (step.selected) out.payments[step.block] += step.threshold;
  }
  for (double p : out.payments) out.revenue += p;
  return out;
}

RevenueOutcome revenue_outcome(const BlockMatroid& m,
                               const std::vector<DistributionSpec>& dists,
                               const std::vector<double>& values,
                               const MatroidRunResult& run) {
  const int n = m.num_blocks();
  const double scale = static_cast<double>(m.spec().scale());
  RevenueOutcome out;
  out.outcome.allocation.assign(n, 0.0);
  out.outcome.payments.assign(n, 0.0);
  for (int b = 0; b < n; ++b) {
    out.outcome.allocation[b] = static_cast<double>(run.selected[b]) / scale;
    out.outcome.welfare += values[b] * static_cast<double>(run.selected[b]);
  }
  for (const auto& step : run.trace.steps) {
    if (!step.selected) continue;
    out.outcome.payments[step.block] +=
        inverse_virtual_value(dists[step.block], step.threshold);
  }
  for (double p : out.outcome.payments) out.outcome.revenue += p;
  out.virtual_surplus = run.weight;
  out.benchmark_draw = 0.0;  // caller fills from greedy_max
  return out;
}

// Per-agent price menu out of a run trace: one entry per presented copy of
// the block, +inf where the unit was not purchasable.
std::vector<std::vector<double>> menus_from_trace(const BlockMatroid& m,
                                                  const AlgorithmTrace& trace,
                                                  const std::vector<DistributionSpec>* dists) {
  std::vector<std::vector<double>> menus(m.num_blocks());
  for (const auto& step : trace.steps) {
    double price = step.surrogate;
    if (dists != nullptr && std::isfinite(price)) {
      price = inverse_virtual_value((*dists)[step.block], price);
    }
    menus[step.block].push_back(price);
  }
  return menus;
}

struct AuditCounters {
  int64_t checks = 0;
  int64_t failures = 0;
  bool ir_ok = true;
};

// Enumerates every purchase quantity against the posted menu; the quantity
// the mechanism assigned must maximize the agent's utility (and be
// individually rational, which is the q = 0 comparison).
void audit_best_response(const std::vector<std::vector<double>>& menus,
                         const std::vector<double>& values,
                         const CardinalityVector& bought, AuditCounters& counters) {
  for (std::size_t b = 0; b < menus.size(); ++b) {
    const auto& menu = menus[b];
    if (menu.empty()) continue;
    ++counters.checks;
    double best_u = 0.0;  // q = 0
    double chosen_u = 0.0;
    double cost = 0.0;
    for (std::size_t q = 0; q < menu.size(); ++q) {
      if (!std::isfinite(menu[q])) break;
      cost += menu[q];
      const double u = values[b] * static_cast<double>(q + 1) - cost;
      best_u = std::max(best_u, u);
      if (static_cast<int>(q + 1) == bought[b]) chosen_u = u;
    }
    if (bought[b] == 0) chosen_u = 0.0;
    if (chosen_u + 1e-9 < best_u) ++counters.failures;
    if (chosen_u < -1e-9) counters.ir_ok = false;
  }
}

// Per-unit rescale for scaled-rational constraints: one matroid copy is
// 1/scale units of service, so agent values and distributions get divided by
// the scale up front.
DistributionSpec rescale_dist(const DistributionSpec& d, double scale) {
  if (scale == 1.0) return d;
  switch (d.kind()) {
    case DistKind::kDiscrete: {
      std::vector<DiscreteAtom> atoms = d.atoms();
      for (auto& a : atoms) a.value /= scale;
      return DistributionSpec::discrete(std::move(atoms));
    }
    case DistKind::kUniform:
      return DistributionSpec::uniform(d.lo() / scale, d.hi() / scale);
    case DistKind::kExponential:
      return DistributionSpec::exponential(d.rate() * scale);
  }
  return d;
}

struct MechTrial {
  double alg = 0.0;        // welfare or revenue, per objective
  double benchmark = 0.0;  // OPT welfare or optimal virtual surplus
  double revenue = 0.0;
  int64_t br_checks = 0;
  int64_t br_failures = 0;
  bool ir_ok = true;
};

int resolve_jobs_local(int jobs, int64_t work) {
  if (jobs <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    jobs = hw == 0 ? 1 : static_cast<int>(hw);
  }
  jobs = static_cast<int>(std::min<int64_t>(jobs, work));
  return std::max(jobs, 1);
}

}  // namespace

MechanismOutcome posted_price_welfare(const BlockMatroid& m,
                                      const std::vector<double>& values,
                                      BlockOrderSource& order, ThresholdOracle& oracle) {
  const MatroidRunResult run = run_matroid(m, values, order, oracle);
  return welfare_outcome(m, values, run);
}

RevenueOutcome posted_price_revenue(const BlockMatroid& m,
                                    const std::vector<DistributionSpec>& value_dists,
                                    const std::vector<double>& values,
                                    BlockOrderSource& order, ThresholdOracle& oracle) {
  const int n = m.num_blocks();
  std::vector<double> phi(n), phi_plus(n);
  for (int b = 0; b < n; ++b) {
    phi[b] = virtual_value(value_dists[b], values[b]);
    phi_plus[b] = std::max(phi[b], 0.0);
  }
  // Acceptance uses the unclipped virtual value: an agent below reserve
  // declines even zero-priced units, matching the purchase behaviour.
  const MatroidRunResult run =
      run_matroid_with_acceptance(m, phi_plus, phi, order, oracle);
  RevenueOutcome out = revenue_outcome(m, value_dists, values, run);
  out.benchmark_draw = greedy_max(m.spec(), phi_plus).objective;
  return out;
}

MechanismReport run_mechanism(const ExperimentConfig& config, int jobs) {
  validate_config(config);
  const BlockMatroid matroid = BlockMatroid::build(config.submodular);
  const int n = matroid.num_blocks();
  const double scale = static_cast<double>(config.submodular.scale());
  const bool revenue_mode = config.objective == MechanismObjective::kRevenue;

  std::vector<DistributionSpec> dists;
  dists.reserve(config.distributions.size());
  for (const auto& d : config.distributions) dists.push_back(rescale_dist(d, scale));

  bool all_discrete = true;
  for (const auto& d : dists) all_discrete &= d.is_discrete();
  const bool exact =
      config.estimator.mode == EstimatorMode::kExact && all_discrete && !revenue_mode;

  WPrimeEnsemble shared_ensemble;
  if (exact) {
    shared_ensemble = WPrimeEnsemble::exact(dists, config.enumeration_cap);
  }

  // Menus are audited on a deterministic prefix of trials.
  const int64_t audit_trials = std::min<int64_t>(config.trials, 256);

  std::vector<MechTrial> results(config.trials);
  const int used_jobs = resolve_jobs_local(jobs, config.trials);
  const int64_t chunk = (config.trials + used_jobs - 1) / used_jobs;
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(used_jobs);
  for (int wk = 0; wk < used_jobs; ++wk) {
    const int64_t begin = wk * chunk;
    const int64_t end = std::min<int64_t>(begin + chunk, config.trials);
    if (begin >= end) break;
    auto body = [&, begin, end]() {
      std::unique_ptr<ThresholdOracle> shared_oracle;
      if (exact) {
        shared_oracle = std::make_unique<ThresholdOracle>(
            matroid, shared_ensemble, config.mutation, config.estimator.cache);
      }
      for (int64_t t = begin; t < end; ++t) {
        RandomSource trial_rng(config.seed, static_cast<uint64_t>(t));
        auto w_rng = trial_rng.fork(1);
        const WeightAssignment values = sample_assignment(dists, w_rng);
        auto policy = make_policy(config.adversary, n, dists, trial_rng.fork(2));

        ThresholdOracle* oracle = shared_oracle.get();
        std::unique_ptr<ThresholdOracle> per_trial;
        if (!exact) {
          auto pool_rng = trial_rng.fork(3);
          WPrimeEnsemble pool =
              WPrimeEnsemble::monte_carlo(dists, config.estimator.pool_size, pool_rng);
          if (revenue_mode) {
            std::vector<std::vector<double>> transformed;
            transformed.reserve(pool.size());
            for (std::size_t k = 0; k < pool.size(); ++k) {
              std::vector<double> wp = pool.scenario(k);
              for (int b = 0; b < n; ++b) {
                wp[b] = std::max(virtual_value(dists[b], wp[b]), 0.0);
              }
              transformed.push_back(std::move(wp));
            }
            pool = WPrimeEnsemble::from_scenarios(std::move(transformed));
          }
          per_trial = std::make_unique<ThresholdOracle>(
              matroid, std::move(pool), config.mutation, config.estimator.cache);
          oracle = per_trial.get();
        }

        MechTrial& out = results[t];
        if (revenue_mode) {
          std::vector<double> phi(n), phi_plus(n);
          for (int b = 0; b < n; ++b) {
            phi[b] = virtual_value(dists[b], values[b]);
            phi_plus[b] = std::max(phi[b], 0.0);
          }
          const MatroidRunResult run =
              run_matroid_with_acceptance(matroid, phi_plus, phi, *policy, *oracle);
          RevenueOutcome ro = revenue_outcome(matroid, dists, values, run);
          ro.benchmark_draw = greedy_max(config.submodular, phi_plus).objective;
          out.alg = ro.outcome.revenue;
          out.benchmark = ro.benchmark_draw;
          out.revenue = ro.outcome.revenue;
          if (t < audit_trials) {
            AuditCounters counters;
            audit_best_response(menus_from_trace(matroid, run.trace, &dists), values,
                                run.selected, counters);
            out.br_checks = counters.checks;
            out.br_failures = counters.failures;
            out.ir_ok = counters.ir_ok;
          }
        } else {
          const MatroidRunResult run = run_matroid(matroid, values, *policy, *oracle);
          const MechanismOutcome mo = welfare_outcome(matroid, values, run);
          out.alg = mo.welfare;
          out.benchmark = greedy_max(config.submodular, values).objective;
          out.revenue = mo.revenue;
          if (t < audit_trials) {
            AuditCounters counters;
            audit_best_response(menus_from_trace(matroid, run.trace, nullptr), values,
                                run.selected, counters);
            out.br_checks = counters.checks;
            out.br_failures = counters.failures;
            out.ir_ok = counters.ir_ok;
          }
        }
      }
    };
    workers.emplace_back([&errors, wk, body]() {
      try {
        body();
      } catch (...) {
        errors[wk] = std::current_exception();
      }
    });
  }
  for (auto& th : workers) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  MechanismReport report;
  report.trials = config.trials;
  report.seed = config.seed;
  report.objective = config.objective;
  std::vector<double> alg(config.trials), bench(config.trials), margin(config.trials),
      revenue(config.trials);
  for (int64_t t = 0; t < config.trials; ++t) {
    alg[t] = results[t].alg;
    bench[t] = results[t].benchmark;
    margin[t] = results[t].alg - 0.5 * results[t].benchmark;
    revenue[t] = results[t].revenue;
    report.best_response_checks += results[t].br_checks;
    report.best_response_failures += results[t].br_failures;
    report.ir_ok &= results[t].ir_ok;
  }
  report.alg = summarize(alg);
  report.benchmark = summarize(bench);
  report.margin = summarize(margin);
  report.revenue = summarize(revenue);
  report.ratio = report.benchmark.mean != 0.0
                     ? report.alg.mean / report.benchmark.mean
                     : std::numeric_limits<double>::quiet_NaN();
  report.ratio_se = ratio_of_means_se(alg, bench, report.alg.mean, report.benchmark.mean);
  report.ci_lo = report.ratio - 1.96 * report.ratio_se;
  report.ci_hi = report.ratio + 1.96 * report.ratio_se;
  report.guarantee_pass = report.margin.mean >= -3.0 * report.margin.se;
  return report;
}

}  // namespace polyprophet
