#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "polyprophet/cli.hpp"
#include "polyprophet/config.hpp"
#include "polyprophet/report_io.hpp"

using namespace polyprophet;

namespace {

const char* kConfigDir = POLYPROPHET_CONFIG_DIR;

std::string scratch_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "polyprophet_test";
  std::filesystem::create_directories(dir);
  return dir.string();
}

std::string write_temp(const std::string& name, const std::string& text) {
  const std::string path = scratch_dir() + "/" + name;
  std::ofstream out(path);
  out << text;
  return path;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kSmallConfig = R"({
  "mode": "experiment",
  "submodular": {"variant": "explicit_table", "n": 2, "values": [0, 2, 1, 2]},
  "distributions": [
    {"kind": "discrete", "support": [[1.0, 0.5], [3.0, 0.5]]},
    {"kind": "discrete", "support": [[0.0, 0.5], [5.0, 0.5]]}
  ],
  "adversary": {"kind": "fixed", "order": [0, 1]},
  "estimator": {"mode": "exact"},
  "trials": 2000,
  "seed": 7
})";

}  // namespace

TEST_CASE("config round-trip: parse -> serialize -> parse is identity") {
  const ExperimentConfig a = parse_config_json(kSmallConfig);
  const std::string canonical = serialize_config(a);
  const ExperimentConfig b = parse_config_json(canonical);
  CHECK(serialize_config(b) == canonical);
  CHECK(config_hash(a) == config_hash(b));
  CHECK(a.submodular == b.submodular);
  CHECK(a.distributions == b.distributions);
  CHECK(a.adversary == b.adversary);
  CHECK(a.trials == b.trials);
  CHECK(a.seed == b.seed);
}

TEST_CASE("round-trip covers every submodular and distribution variant") {
  const char* doc = R"({
    "mode": "mechanism",
    "objective": "revenue",
    "submodular": {"variant": "network_cut", "nodes": 3, "source": 0,
                   "edges": [[0,1,2],[0,2,1]], "agent_nodes": [[1],[2]]},
    "distributions": [
      {"kind": "uniform", "lo": 0.0, "hi": 1.0},
      {"kind": "exponential", "rate": 2.0}
    ],
    "adversary": {"kind": "adaptive_greedy"},
    "estimator": {"mode": "monte_carlo", "pool": 256},
    "trials": 50,
    "seed": 9
  })";
  const ExperimentConfig a = parse_config_json(doc);
  const ExperimentConfig b = parse_config_json(serialize_config(a));
  CHECK(serialize_config(a) == serialize_config(b));
  CHECK(a.estimator.pool_size == 256);
  CHECK(a.objective == MechanismObjective::kRevenue);
}

TEST_CASE("rational tables are canonicalized to scaled integer specs") {
  const char* doc = R"({
    "mode": "experiment",
    "submodular": {"variant": "rational_table", "n": 2,
                   "values": ["0", "1/2", "1/2", "3/4"]},
    "distributions": [
      {"kind": "discrete", "support": [[1.0, 1.0]]},
      {"kind": "discrete", "support": [[1.0, 1.0]]}
    ],
    "adversary": {"kind": "fixed", "order": [0, 1]},
    "estimator": {"mode": "exact"},
    "trials": 10,
    "seed": 1
  })";
  const ExperimentConfig a = parse_config_json(doc);
  CHECK(a.submodular.kind() == SubmodularKind::kScaledRational);
  CHECK(a.submodular.scale() == 4);
  CHECK(a.submodular.table() == std::vector<int64_t>{0, 2, 2, 3});
  // canonical form survives a round trip
  const ExperimentConfig b = parse_config_json(serialize_config(a));
  CHECK(serialize_config(a) == serialize_config(b));
}

TEST_CASE("unknown keys are rejected with a pointer to the field") {
  const char* doc = R"({
    "mode": "experiment",
    "submodular": {"variant": "uniform_rank", "n": 2, "k": 1, "oops": 3},
    "distributions": [],
    "adversary": {"kind": "fixed", "order": []},
    "estimator": {"mode": "exact"},
    "trials": 1,
    "seed": 1
  })";
  try {
    parse_config_json(doc);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("/submodular/oops") != std::string::npos);
  }
}

TEST_CASE("bad probabilities are reported with their location") {
  const char* doc = R"({
    "mode": "experiment",
    "submodular": {"variant": "uniform_rank", "n": 1, "k": 1},
    "distributions": [{"kind": "discrete", "support": [[1.0, 0.5], [2.0, 0.4]]}],
    "adversary": {"kind": "fixed", "order": [0]},
    "estimator": {"mode": "exact"},
    "trials": 1,
    "seed": 1
  })";
  try {
    parse_config_json(doc);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("/distributions/0") != std::string::npos);
    CHECK(std::string(e.what()).find("sum to 1") != std::string::npos);
  }
}

TEST_CASE("cmd_run writes a JSON report and appends a CSV row") {
  const std::string config_path = write_temp("run_small.json", kSmallConfig);
  const std::string out = scratch_dir() + "/run_small_out";
  std::filesystem::remove(out + ".json");
  std::filesystem::remove(out + ".csv");

  cli::Options opts;
  opts.config_path = config_path;
  opts.out_path = out;
  opts.jobs = 2;
  std::ostringstream cout, cerr;
  CHECK(cli::cmd_run(opts, cout, cerr) == cli::kExitOk);
  CHECK(std::filesystem::exists(out + ".json"));
  CHECK(std::filesystem::exists(out + ".csv"));
  const std::string csv = read_file(out + ".csv");
  CHECK(csv.find(kCsvVersionComment) == 0);
  CHECK(csv.find("experiment") != std::string::npos);
}

TEST_CASE("cmd_run is deterministic modulo the timestamp field") {
  const std::string config_path = write_temp("run_det.json", kSmallConfig);
  const std::string out_a = scratch_dir() + "/det_a";
  const std::string out_b = scratch_dir() + "/det_b";
  for (const auto& base : {out_a, out_b}) {
    std::filesystem::remove(base + ".json");
    std::filesystem::remove(base + ".csv");
  }
  cli::Options opts;
  opts.config_path = config_path;
  opts.jobs = 3;
  std::ostringstream cout, cerr;
  opts.out_path = out_a;
  REQUIRE(cli::cmd_run(opts, cout, cerr) == cli::kExitOk);
  opts.out_path = out_b;
  opts.jobs = 1;
  REQUIRE(cli::cmd_run(opts, cout, cerr) == cli::kExitOk);
  CHECK(strip_volatile_fields(read_file(out_a + ".json")) ==
        strip_volatile_fields(read_file(out_b + ".json")));
  CHECK(read_file(out_a + ".csv") == read_file(out_b + ".csv"));
}

TEST_CASE("cmd_run rejects malformed configs with exit code 2") {
  const std::string bad = write_temp("run_bad.json", R"({
    "mode": "experiment",
    "submodular": {"variant": "uniform_rank", "n": 1, "k": 1},
    "distributions": [{"kind": "discrete", "support": [[1.0, 0.9]]}],
    "adversary": {"kind": "fixed", "order": [0]},
    "estimator": {"mode": "exact"},
    "trials": 100,
    "seed": 1
  })");
  cli::Options opts;
  opts.config_path = bad;
  std::ostringstream cout, cerr;
  CHECK(cli::cmd_run(opts, cout, cerr) == cli::kExitValidation);
  CHECK(cerr.str().find("/distributions/0") != std::string::npos);

  opts.config_path = scratch_dir() + "/missing.json";
  CHECK(cli::cmd_run(opts, cout, cerr) == cli::kExitValidation);
}

TEST_CASE("cmd_verify: budget 0 warns and exits 0; mutants exit 1 naming the broken check") {
  const std::string config_path =
      write_temp("verify_ok.json", std::string(R"({
    "mode": "verify",
    "submodular": {"variant": "explicit_table", "n": 2, "values": [0, 2, 1, 2]},
    "distributions": [
      {"kind": "discrete", "support": [[3.0, 1.0]]},
      {"kind": "discrete", "support": [[5.0, 1.0]]}
    ],
    "adversary": {"kind": "fixed", "order": [0, 1]},
    "estimator": {"mode": "exact"},
    "trials": 2,
    "seed": 13
  })"));

  cli::Options opts;
  opts.config_path = config_path;
  opts.jobs = 4;
  SUBCASE("budget 0") {
    opts.budget = 0;
    std::ostringstream cout, cerr;
    CHECK(cli::cmd_verify(opts, cout, cerr) == cli::kExitOk);
    CHECK(cout.str().find("0 instances checked") != std::string::npos);
    CHECK(cerr.str().find("warning") != std::string::npos);
  }
  SUBCASE("small budget passes") {
    opts.budget = 25;
    std::ostringstream cout, cerr;
    CHECK(cli::cmd_verify(opts, cout, cerr) == cli::kExitOk);
    CHECK(cout.str().find("all properties hold") != std::string::npos);
  }
  SUBCASE("halved thresholds are caught") {
    const std::string mutant = write_temp("verify_mutant.json", std::string(R"({
      "mode": "verify",
      "submodular": {"variant": "explicit_table", "n": 2, "values": [0, 2, 1, 2]},
      "distributions": [
        {"kind": "discrete", "support": [[3.0, 1.0]]},
        {"kind": "discrete", "support": [[5.0, 1.0]]}
      ],
      "adversary": {"kind": "fixed", "order": [0, 1]},
      "estimator": {"mode": "exact"},
      "trials": 2,
      "seed": 13,
      "mutation": "halve_thresholds"
    })"));
    cli::Options mopts;
    mopts.config_path = mutant;
    mopts.budget = 25;
    mopts.jobs = 4;
    std::ostringstream cout, cerr;
    CHECK(cli::cmd_verify(mopts, cout, cerr) == cli::kExitPropertyFailure);
    CHECK(cout.str().find("[FAIL] threshold_sum_identity") != std::string::npos);
  }
}

TEST_CASE("cmd_sweep: grid cells become CSV rows; empty grids exit 2") {
  SUBCASE("3x1 grid over the trial count") {
    const std::string doc = std::string(R"({
      "mode": "experiment",
      "submodular": {"variant": "uniform_rank", "n": 2, "k": 1},
      "distributions": [
        {"kind": "discrete", "support": [[1.0, 1.0]]},
        {"kind": "discrete", "support": [[0.0, 0.5], [2.0, 0.5]]}
      ],
      "adversary": {"kind": "fixed", "order": [0, 1]},
      "estimator": {"mode": "exact"},
      "trials": 100,
      "seed": 3,
      "sweep": {"/trials": [100, 200, 300]}
    })");
    const std::string path = write_temp("sweep3.json", doc);
    const std::string out = scratch_dir() + "/sweep3_out";
    std::filesystem::remove(out + ".csv");
    cli::Options opts;
    opts.config_path = path;
    opts.out_path = out;
    opts.jobs = 2;
    std::ostringstream cout, cerr;
    CHECK(cli::cmd_sweep(opts, cout, cerr) == cli::kExitOk);
    const std::string csv = read_file(out + ".csv");
    int rows = 0;
    for (std::size_t pos = 0; (pos = csv.find("\r\n", pos)) != std::string::npos; pos += 2) {
      ++rows;
    }
    CHECK(rows == 5);  // comment + header + 3 cells
  }
  SUBCASE("3x3 grid expands to 9 cells") {
    std::string doc = kSmallConfig;
    doc.insert(doc.rfind('}'),
               R"(, "sweep": {"/trials": [10, 20, 30], "/seed": [1, 2, 3]})");
    const auto cells = expand_sweep(doc);
    REQUIRE(cells.size() == 9);
    // cross product in axis order, last axis fastest
    CHECK(cells[0].trials == 10);
    CHECK(cells[0].seed == 1);
    CHECK(cells[8].trials == 30);
    CHECK(cells[8].seed == 3);
  }
  SUBCASE("missing grid") {
    const std::string path = write_temp("sweep_none.json", kSmallConfig);
    cli::Options opts;
    opts.config_path = path;
    std::ostringstream cout, cerr;
    CHECK(cli::cmd_sweep(opts, cout, cerr) == cli::kExitValidation);
  }
  SUBCASE("empty grid") {
    std::string doc = kSmallConfig;
    doc.insert(doc.rfind('}'), R"(, "sweep": {})");
    const std::string path = write_temp("sweep_empty.json", doc);
    cli::Options opts;
    opts.config_path = path;
    std::ostringstream cout, cerr;
    CHECK(cli::cmd_sweep(opts, cout, cerr) == cli::kExitValidation);
  }
}

TEST_CASE("shipped configs parse") {
  for (const char* name :
       {"tight_pair.json", "tight_pair_sweep.json", "uniform_rank.json",
        "position_auction.json", "network_cut.json", "mech_position.json",
        "mech_spatial.json", "verify_small.json"}) {
    const std::string path = std::string(kConfigDir) + "/" + name;
    REQUIRE_MESSAGE(std::filesystem::exists(path), name);
    if (std::string(name) == "tight_pair_sweep.json") {
      CHECK(has_sweep(read_file(path)));
      CHECK(expand_sweep(read_file(path)).size() == 2);
    } else {
      CHECK_NOTHROW(parse_config_file(path));
    }
  }
}
