#include <doctest.h>

#include <cmath>

#include "polyprophet/adversary.hpp"
#include "polyprophet/errors.hpp"
#include "polyprophet/harness.hpp"

using namespace polyprophet;

namespace {

ExperimentConfig det21_config() {
  ExperimentConfig config;
  config.submodular = SubmodularSpec::explicit_table(2, {0, 2, 1, 2});
  config.distributions = {DistributionSpec::point_mass(3.0),
                          DistributionSpec::point_mass(5.0)};
  config.adversary = {AdversaryKind::kFixedOrder, {0, 1}};
  config.estimator = {EstimatorMode::kExact, 4096, true};
  config.trials = 200;
  config.seed = 11;
  return config;
}

}  // namespace

TEST_CASE("next_block") {
  std::vector<DistributionSpec> d = {
      DistributionSpec::discrete({{0.0, 0.5}, {4.0, 0.5}}),   // mean 2, median 0
      DistributionSpec::point_mass(1.0),                      // mean 1
      DistributionSpec::discrete({{2.0, 0.5}, {4.0, 0.5}})};  // mean 3, median 2

  SUBCASE("fixed order follows its permutation") {
    auto p = make_policy({AdversaryKind::kFixedOrder, {2, 0, 1}}, 3, d, RandomSource(1));
    CHECK(next_block(*p, {}, {}) == 2);
    CHECK(next_block(*p, {2}, {3.0}) == 0);
    CHECK(next_block(*p, {2, 0}, {3.0, 4.0}) == 1);
    CHECK_THROWS_AS(next_block(*p, {2, 0, 1}, {3.0, 4.0, 1.0}), ExhaustedError);
  }
  SUBCASE("fixed order must be a permutation") {
    CHECK_THROWS_AS(make_policy({AdversaryKind::kFixedOrder, {0, 0, 1}}, 3, d,
                                RandomSource(1)),
                    ValidationError);
  }
  SUBCASE("uniform random order is reproducible from its seed") {
    auto a = make_policy({AdversaryKind::kUniformRandomOrder, {}}, 3, d, RandomSource(9, 4));
    auto b = make_policy({AdversaryKind::kUniformRandomOrder, {}}, 3, d, RandomSource(9, 4));
    std::vector<int> presented;
    std::vector<double> revealed;
    for (int i = 0; i < 3; ++i) {
      const int x = next_block(*a, presented, revealed);
      CHECK(x == next_block(*b, presented, revealed));
      presented.push_back(x);
      revealed.push_back(0.0);
    }
  }
  SUBCASE("adaptive greedy follows its documented scoring rule") {
    auto p = make_policy({AdversaryKind::kAdaptiveGreedy, {}}, 3, d, RandomSource(1));
    // no reveal yet: poorest mean first -> block 1 (mean 1)
    CHECK(next_block(*p, {}, {}) == 1);
    // revealed 1.0 for block 1, its median is 1 -> not below: poorest mean
    // among {0, 2} -> block 0 (mean 2 vs 3)
    CHECK(next_block(*p, {1}, {1.0}) == 0);
    // revealed 0.0 for block 0 which is below its median 0? 0 < 0 is false:
    // still not below, so poorest mean among {2} -> block 2
    CHECK(next_block(*p, {1, 0}, {1.0, 0.0}) == 2);

    // a below-median reveal flips the stance to richest-first
    auto q = make_policy({AdversaryKind::kAdaptiveGreedy, {}}, 3, d, RandomSource(1));
    CHECK(next_block(*q, {2}, {2.0}) == 1);   // 2 >= median 2: poorest first
    auto r = make_policy({AdversaryKind::kAdaptiveGreedy, {}}, 3, d, RandomSource(1));
    CHECK(next_block(*r, {2}, {1.0}) == 0);   // 1 < median 2: richest remaining
  }
}

TEST_CASE("deterministic instance: ALG 6, OPT 8, ratio 0.75, zero variance") {
  const auto report = run_experiment(det21_config(), 2);
  CHECK(report.alg.mean == doctest::Approx(6.0));
  CHECK(report.alg.stddev == doctest::Approx(0.0));
  CHECK(report.opt.mean == doctest::Approx(8.0));
  CHECK(report.ratio == doctest::Approx(0.75));
  CHECK(report.guarantee_pass);
  CHECK(report.reduction_objective_exact);
  CHECK(report.reduction_opt_ok);
}

TEST_CASE("reports are a pure function of (config, seed)") {
  const auto config = det21_config();
  const auto a = run_experiment(config, 1);
  const auto b = run_experiment(config, 4);  // jobs must not change anything
  CHECK(a.alg.mean == b.alg.mean);
  CHECK(a.opt.mean == b.opt.mean);
  CHECK(a.ratio == b.ratio);
  CHECK(a.margin.se == b.margin.se);

  ExperimentConfig noisy = config;
  noisy.distributions = {DistributionSpec::discrete({{1.0, 0.5}, {4.0, 0.5}}),
                         DistributionSpec::discrete({{0.0, 0.5}, {5.0, 0.5}})};
  noisy.trials = 5000;
  const auto c = run_experiment(noisy, 1);
  const auto e = run_experiment(noisy, 8);
  CHECK(c.alg.mean == e.alg.mean);
  CHECK(c.ratio == e.ratio);

  noisy.seed = 12;
  const auto f = run_experiment(noisy, 1);
  CHECK(f.alg.mean != c.alg.mean);  // different seed, different draws
}

TEST_CASE("fixed and uniform-random orders agree on exchangeable instances") {
  ExperimentConfig config;
  config.submodular = SubmodularSpec::uniform_rank(3, 2);
  auto d = DistributionSpec::discrete({{0.5, 0.5}, {2.5, 0.5}});
  config.distributions = {d, d, d};
  config.estimator = {EstimatorMode::kExact, 4096, true};
  config.trials = 20'000;
  config.seed = 21;

  config.adversary = {AdversaryKind::kFixedOrder, {0, 1, 2}};
  const auto fixed = run_experiment(config, 4);
  config.adversary = {AdversaryKind::kUniformRandomOrder, {}};
  const auto random = run_experiment(config, 4);
  const double se = std::sqrt(fixed.ratio_se * fixed.ratio_se +
                              random.ratio_se * random.ratio_se);
  CHECK(std::abs(fixed.ratio - random.ratio) <= 3.0 * se);
}

TEST_CASE("validate_config rejects inconsistent configs") {
  ExperimentConfig config = det21_config();
  config.distributions.pop_back();
  CHECK_THROWS_AS(validate_config(config), ValidationError);

  config = det21_config();
  config.trials = 0;
  CHECK_THROWS_AS(validate_config(config), ValidationError);

  config = det21_config();
  config.distributions[0] = DistributionSpec::uniform(0, 1);
  CHECK_THROWS_AS(validate_config(config), ValidationError);  // exact + continuous

  config = det21_config();
  config.adversary = {AdversaryKind::kFixedOrder, {0, 0}};
  CHECK_THROWS_AS(validate_config(config), ValidationError);

  config = det21_config();
  config.mode = RunMode::kMechanism;
  config.objective = MechanismObjective::kRevenue;
  CHECK_THROWS_AS(validate_config(config), ValidationError);  // discrete + revenue
}

TEST_CASE("verify_properties passes on the shipped deterministic example") {
  ExperimentConfig config = det21_config();
  config.mode = RunMode::kVerify;
  const auto report = verify_properties(config, 60, 4);
  CHECK(report.all_pass);
  CHECK(report.instances == 61);  // config instance + 60 fuzzed
  const auto* identity = report.find("threshold_sum_identity");
  REQUIRE(identity != nullptr);
  CHECK(identity->checks > 0);
  CHECK(identity->failures == 0);
  const auto* exchange = report.find("exchange_axiom");
  REQUIRE(exchange != nullptr);
  CHECK(exchange->failures == 0);
}

TEST_CASE("mutated thresholds are caught by the threshold-sum identity") {
  ExperimentConfig config = det21_config();
  config.mode = RunMode::kVerify;
  config.mutation = ThresholdMutation::kHalve;
  const auto report = verify_properties(config, 40, 4);
  CHECK(!report.all_pass);
  const auto* identity = report.find("threshold_sum_identity");
  REQUIRE(identity != nullptr);
  CHECK(identity->failures > 0);
  CHECK(!identity->counterexample.empty());
}

TEST_CASE("budget 0 checks nothing and reports success") {
  ExperimentConfig config = det21_config();
  const auto report = verify_properties(config, 0, 1);
  CHECK(report.instances == 0);
  CHECK(report.all_pass);
  CHECK(report.properties.empty());
}

TEST_CASE("trial errors carry the trial index") {
  // An adversary policy that breaks the contract mid-run.
  struct Broken final : BlockOrderSource {
    int next_block(const std::vector<int>&, const std::vector<double>&) override {
      return 99;
    }
  };
  auto m = BlockMatroid::build(SubmodularSpec::uniform_rank(2, 1));
  ThresholdOracle oracle(
      m, WPrimeEnsemble::exact({DistributionSpec::point_mass(1.0),
                                DistributionSpec::point_mass(2.0)}));
  Broken broken;
  CHECK_THROWS_AS(run_matroid(m, {1.0, 2.0}, broken, oracle),
                  AdversaryContractViolation);
}
