#include <doctest.h>

#include "oracles.hpp"
#include "polyprophet/errors.hpp"
#include "polyprophet/harness.hpp"
#include "polyprophet/polymatroid.hpp"

using namespace polyprophet;

namespace {

const SubmodularSpec& table_0223() {
  static const SubmodularSpec f = SubmodularSpec::explicit_table(2, {0, 2, 2, 3});
  return f;
}

}  // namespace

TEST_CASE("is_member") {
  CHECK(is_member(table_0223(), {2, 1}));
  CHECK(!is_member(table_0223(), {2, 2}));  // sum 4 > 3
  CHECK(!is_member(table_0223(), {-1, 0}));
  auto rank = SubmodularSpec::uniform_rank(3, 2);
  CHECK(is_member(rank, {1, 1, 0}));
  CHECK(!is_member(rank, {1, 1, 1}));
  CHECK_THROWS_AS(is_member(table_0223(), {1}), PreconditionError);
}

TEST_CASE("greedy_max worked examples") {
  SUBCASE("table {0,2,2,3}") {
    const auto r = greedy_max(table_0223(), {5.0, 3.0});
    CHECK(r.z == Allocation{2, 1});
    CHECK(r.objective == doctest::Approx(13.0));
    const auto r2 = greedy_max(table_0223(), {3.0, 5.0});
    CHECK(r2.z == Allocation{1, 2});
    CHECK(r2.objective == doctest::Approx(13.0));
  }
  SUBCASE("all-zero weights give objective 0") {
    CHECK(greedy_max(table_0223(), {0.0, 0.0}).objective == doctest::Approx(0.0));
  }
  SUBCASE("uniform rank picks the k largest weights") {
    auto f = SubmodularSpec::uniform_rank(4, 2);
    const auto r = greedy_max(f, {1.0, 7.0, 3.0, 5.0});
    CHECK(r.z == Allocation{0, 1, 0, 1});
    CHECK(r.objective == doctest::Approx(12.0));
    CHECK(r.objective == doctest::Approx(brute_force_max(f, {1.0, 7.0, 3.0, 5.0}).objective));
  }
  SUBCASE("single element") {
    auto f = SubmodularSpec::explicit_table(1, {0, 2});
    const auto r = brute_force_max(f, {4.0});
    CHECK(r.z == Allocation{2});
    CHECK(r.objective == doctest::Approx(8.0));
    CHECK(greedy_max(f, {4.0}).objective == doctest::Approx(8.0));
  }
}

TEST_CASE("brute_force_max caps") {
  auto big = SubmodularSpec::uniform_rank(7, 3);
  CHECK_THROWS_AS(brute_force_max(big, {1, 1, 1, 1, 1, 1, 1}), TooLarge);
  auto tall = SubmodularSpec::explicit_table(1, {0, 9});
  CHECK_THROWS_AS(brute_force_max(tall, {1.0}), TooLarge);
}

TEST_CASE("greedy output is always feasible and matches brute force exactly") {
  RandomSource rng(424242);
  int checked = 0;
  for (int it = 0; checked < 300; ++it) {
    const auto config = fuzz_instance(17, it);
    const auto& f = config.submodular;
    if (f.n() > 5 || f.total_value() > 6) continue;
    WeightAssignment w;
    for (int i = 0; i < f.n(); ++i) {
      w.push_back(static_cast<double>(rng.next_below(10)));  // integer weights: exact
    }
    const auto greedy = greedy_max(f, w);
    const auto brute = brute_force_max(f, w);
    CHECK(is_member(f, greedy.z));
    CHECK(greedy.objective == brute.objective);
    ++checked;
  }
  CHECK(checked == 300);
}

TEST_CASE("scale covariance: scaling f by c scales the greedy optimum by c") {
  RandomSource rng(777);
  for (int it = 0; it < 50; ++it) {
    const auto config = fuzz_instance(23, it);
    const auto& f = config.submodular;
    if (f.n() > 4) continue;
    const int64_t c = 2 + static_cast<int64_t>(rng.next_below(3));
    std::vector<int64_t> scaled;
    for (uint32_t mask = 0; mask < (1u << f.n()); ++mask) {
      scaled.push_back(c * f.evaluate(mask));
    }
    const auto fc = SubmodularSpec::scaled_rational(f.n(), std::move(scaled), c);
    WeightAssignment w;
    for (int i = 0; i < f.n(); ++i) w.push_back(static_cast<double>(rng.next_below(6)));
    const auto base = greedy_max(f, w);
    const auto lifted = greedy_max(fc, w);
    for (int i = 0; i < f.n(); ++i) CHECK(lifted.z[i] == c * base.z[i]);
    CHECK(lifted.objective == doctest::Approx(static_cast<double>(c) * base.objective));
  }
}

TEST_CASE("raising any single weight never decreases the optimum") {
  RandomSource rng(31337);
  for (int it = 0; it < 60; ++it) {
    const auto config = fuzz_instance(29, it);
    const auto& f = config.submodular;
    WeightAssignment w;
    for (int i = 0; i < f.n(); ++i) w.push_back(static_cast<double>(rng.next_below(5)));
    const double before = greedy_max(f, w).objective;
    const int bump = static_cast<int>(rng.next_below(f.n()));
    w[bump] += 1.0 + static_cast<double>(rng.next_below(3));
    CHECK(greedy_max(f, w).objective >= before - 1e-12);
  }
}
