#include "polyprophet/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "polyprophet/rational.hpp"

namespace polyprophet {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ValidationError("config error at " + (path.empty() ? "/" : path) + ": " + what);
}

void check_keys(const json& obj, const std::string& path,
                const std::set<std::string>& allowed) {
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) fail(path + "/" + item.key(), "unknown key");
  }
}

const json& require(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path + "/" + key, "missing required key");
  return *it;
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

int64_t as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer() && !v.is_number_unsigned()) fail(path, "expected an integer");
  return v.get<int64_t>();
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

Rational rational_from(const json& v, const std::string& path) {
  if (v.is_number_integer() || v.is_number_unsigned()) {
    return Rational::integer(v.get<int64_t>());
  }
  if (v.is_string()) {
    try {
      return Rational::parse(v.get<std::string>());
    } catch (const ValidationError& e) {
      fail(path, e.what());
    }
  }
  fail(path, "expected an integer or a rational string like \"3/10\" or \"0.3\"");
}

SubmodularSpec parse_submodular(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  const std::string variant = as_string(require(j, "variant", path), path + "/variant");
  try {
    if (variant == "explicit_table") {
      check_keys(j, path, {"variant", "n", "values"});
      const int n = static_cast<int>(as_int(require(j, "n", path), path + "/n"));
      const json& vals = require(j, "values", path);
      if (!vals.is_array()) fail(path + "/values", "expected an array");
      std::vector<int64_t> table;
      for (std::size_t i = 0; i < vals.size(); ++i) {
        table.push_back(as_int(vals[i], path + "/values/" + std::to_string(i)));
      }
      return SubmodularSpec::explicit_table(n, std::move(table));
    }
    if (variant == "rational_table") {
      check_keys(j, path, {"variant", "n", "values"});
      const int n = static_cast<int>(as_int(require(j, "n", path), path + "/n"));
      const json& vals = require(j, "values", path);
      if (!vals.is_array()) fail(path + "/values", "expected an array");
      std::vector<Rational> table;
      for (std::size_t i = 0; i < vals.size(); ++i) {
        table.push_back(rational_from(vals[i], path + "/values/" + std::to_string(i)));
      }
      return rationalize(n, table).spec;
    }
    if (variant == "scaled_rational") {
      check_keys(j, path, {"variant", "n", "scaled_values", "scale"});
      const int n = static_cast<int>(as_int(require(j, "n", path), path + "/n"));
      const json& vals = require(j, "scaled_values", path);
      if (!vals.is_array()) fail(path + "/scaled_values", "expected an array");
      std::vector<int64_t> table;
      for (std::size_t i = 0; i < vals.size(); ++i) {
        table.push_back(as_int(vals[i], path + "/scaled_values/" + std::to_string(i)));
      }
      const int64_t scale = as_int(require(j, "scale", path), path + "/scale");
      return SubmodularSpec::scaled_rational(n, std::move(table), scale);
    }
    if (variant == "uniform_rank") {
      check_keys(j, path, {"variant", "n", "k"});
      return SubmodularSpec::uniform_rank(
          static_cast<int>(as_int(require(j, "n", path), path + "/n")),
          static_cast<int>(as_int(require(j, "k", path), path + "/k")));
    }
    if (variant == "position_auction") {
      check_keys(j, path, {"variant", "agents", "instances"});
      const int agents =
          static_cast<int>(as_int(require(j, "agents", path), path + "/agents"));
      const json& insts = require(j, "instances", path);
      if (!insts.is_array()) fail(path + "/instances", "expected an array");
      std::vector<RationalPositionInstance> instances;
      for (std::size_t k = 0; k < insts.size(); ++k) {
        const std::string ipath = path + "/instances/" + std::to_string(k);
        if (!insts[k].is_object()) fail(ipath, "expected an object");
        check_keys(insts[k], ipath, {"qualities", "interested"});
        RationalPositionInstance inst;
        const json& quals = require(insts[k], "qualities", ipath);
        if (!quals.is_array()) fail(ipath + "/qualities", "expected an array");
        for (std::size_t q = 0; q < quals.size(); ++q) {
          inst.qualities.push_back(
              rational_from(quals[q], ipath + "/qualities/" + std::to_string(q)));
        }
        const json& interested = require(insts[k], "interested", ipath);
        if (!interested.is_array()) fail(ipath + "/interested", "expected an array");
        for (std::size_t a = 0; a < interested.size(); ++a) {
          inst.agents.push_back(static_cast<int>(
              as_int(interested[a], ipath + "/interested/" + std::to_string(a))));
        }
        instances.push_back(std::move(inst));
      }
      return rationalize_position_auction(agents, instances).spec;
    }
    if (variant == "network_cut") {
      check_keys(j, path, {"variant", "nodes", "source", "edges", "agent_nodes"});
      NetworkCutSpec spec;
      spec.n_nodes = static_cast<int>(as_int(require(j, "nodes", path), path + "/nodes"));
      spec.source = static_cast<int>(as_int(require(j, "source", path), path + "/source"));
      const json& edges = require(j, "edges", path);
      if (!edges.is_array()) fail(path + "/edges", "expected an array");
      for (std::size_t e = 0; e < edges.size(); ++e) {
        const std::string epath = path + "/edges/" + std::to_string(e);
        if (!edges[e].is_array() || edges[e].size() != 3) {
          fail(epath, "expected [from, to, capacity]");
        }
        spec.edges.push_back({static_cast<int>(as_int(edges[e][0], epath)),
                              static_cast<int>(as_int(edges[e][1], epath)),
                              as_int(edges[e][2], epath)});
      }
      const json& agent_nodes = require(j, "agent_nodes", path);
      if (!agent_nodes.is_array()) fail(path + "/agent_nodes", "expected an array");
      for (std::size_t a = 0; a < agent_nodes.size(); ++a) {
        const std::string apath = path + "/agent_nodes/" + std::to_string(a);
        if (!agent_nodes[a].is_array()) fail(apath, "expected an array of node ids");
        std::vector<int> nodes;
        for (std::size_t i = 0; i < agent_nodes[a].size(); ++i) {
          nodes.push_back(static_cast<int>(
              as_int(agent_nodes[a][i], apath + "/" + std::to_string(i))));
        }
        spec.agent_nodes.push_back(std::move(nodes));
      }
      return SubmodularSpec::network_cut(std::move(spec));
    }
  } catch (const ValidationError& e) {
    // re-anchor factory errors at the submodular section
    const std::string what = e.what();
    if (what.rfind("config error", 0) == 0) throw;
    fail(path, what);
  }
  fail(path + "/variant", "unknown variant '" + variant + "'");
}

DistributionSpec parse_distribution(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  const std::string kind = as_string(require(j, "kind", path), path + "/kind");
  try {
    if (kind == "discrete") {
      check_keys(j, path, {"kind", "support"});
      const json& support = require(j, "support", path);
      if (!support.is_array()) fail(path + "/support", "expected an array");
      std::vector<DiscreteAtom> atoms;
      for (std::size_t i = 0; i < support.size(); ++i) {
        const std::string apath = path + "/support/" + std::to_string(i);
        if (!support[i].is_array() || support[i].size() != 2) {
          fail(apath, "expected [value, probability]");
        }
        atoms.push_back({as_number(support[i][0], apath), as_number(support[i][1], apath)});
      }
      return DistributionSpec::discrete(std::move(atoms));
    }
    if (kind == "uniform") {
      check_keys(j, path, {"kind", "lo", "hi"});
      return DistributionSpec::uniform(as_number(require(j, "lo", path), path + "/lo"),
                                       as_number(require(j, "hi", path), path + "/hi"));
    }
    if (kind == "exponential") {
      check_keys(j, path, {"kind", "rate"});
      return DistributionSpec::exponential(
          as_number(require(j, "rate", path), path + "/rate"));
    }
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    if (what.rfind("config error", 0) == 0) throw;
    fail(path, what);
  }
  fail(path + "/kind", "unknown kind '" + kind + "'");
}

AdversarySpec parse_adversary(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  const std::string kind = as_string(require(j, "kind", path), path + "/kind");
  AdversarySpec spec;
  if (kind == "fixed") {
    check_keys(j, path, {"kind", "order"});
    spec.kind = AdversaryKind::kFixedOrder;
    const json& order = require(j, "order", path);
    if (!order.is_array()) fail(path + "/order", "expected an array");
    for (std::size_t i = 0; i < order.size(); ++i) {
      spec.order.push_back(
          static_cast<int>(as_int(order[i], path + "/order/" + std::to_string(i))));
    }
    return spec;
  }
  if (kind == "uniform_random") {
    check_keys(j, path, {"kind"});
    spec.kind = AdversaryKind::kUniformRandomOrder;
    return spec;
  }
  if (kind == "adaptive_greedy") {
    check_keys(j, path, {"kind"});
    spec.kind = AdversaryKind::kAdaptiveGreedy;
    return spec;
  }
  fail(path + "/kind", "unknown kind '" + kind + "'");
}

ThresholdEstimator parse_estimator(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  const std::string mode = as_string(require(j, "mode", path), path + "/mode");
  ThresholdEstimator est;
  if (mode == "exact") {
    check_keys(j, path, {"mode", "cache"});
    est.mode = EstimatorMode::kExact;
  } else if (mode == "monte_carlo") {
    check_keys(j, path, {"mode", "pool", "cache"});
    est.mode = EstimatorMode::kMonteCarlo;
    if (j.contains("pool")) {
      est.pool_size = static_cast<int>(as_int(j["pool"], path + "/pool"));
    }
  } else {
    fail(path + "/mode", "unknown mode '" + mode + "'");
  }
  if (j.contains("cache")) {
    if (!j["cache"].is_boolean()) fail(path + "/cache", "expected a boolean");
    est.cache = j["cache"].get<bool>();
  }
  return est;
}

ExperimentConfig parse_document(const json& doc) {
  if (!doc.is_object()) fail("", "config root must be an object");
  check_keys(doc, "",
             {"mode", "submodular", "distributions", "adversary", "estimator", "trials",
              "seed", "objective", "budget", "mutation", "enumeration_cap", "sweep"});

  ExperimentConfig config;
  const std::string mode = as_string(require(doc, "mode", ""), "/mode");
  if (mode == "experiment") {
    config.mode = RunMode::kExperiment;
  } else if (mode == "verify") {
    config.mode = RunMode::kVerify;
  } else if (mode == "mechanism") {
    config.mode = RunMode::kMechanism;
  } else {
    fail("/mode", "must be experiment, verify, or mechanism");
  }

  config.submodular = parse_submodular(require(doc, "submodular", ""), "/submodular");

  const json& dists = require(doc, "distributions", "");
  if (!dists.is_array()) fail("/distributions", "expected an array");
  for (std::size_t i = 0; i < dists.size(); ++i) {
    config.distributions.push_back(
        parse_distribution(dists[i], "/distributions/" + std::to_string(i)));
  }

  config.adversary = parse_adversary(require(doc, "adversary", ""), "/adversary");
  config.estimator = parse_estimator(require(doc, "estimator", ""), "/estimator");
  config.trials = as_int(require(doc, "trials", ""), "/trials");
  const int64_t seed = as_int(require(doc, "seed", ""), "/seed");
  config.seed = static_cast<uint64_t>(seed);

  if (doc.contains("objective")) {
    const std::string obj = as_string(doc["objective"], "/objective");
    if (obj == "welfare") {
      config.objective = MechanismObjective::kWelfare;
    } else if (obj == "revenue") {
      config.objective = MechanismObjective::kRevenue;
    } else {
      fail("/objective", "must be welfare or revenue");
    }
  }
  if (doc.contains("budget")) {
    config.fuzz_budget = static_cast<int>(as_int(doc["budget"], "/budget"));
  }
  if (doc.contains("mutation")) {
    const std::string mut = as_string(doc["mutation"], "/mutation");
    if (mut == "none") {
      config.mutation = ThresholdMutation::kNone;
    } else if (mut == "halve_thresholds") {
      config.mutation = ThresholdMutation::kHalve;
    } else {
      fail("/mutation", "must be none or halve_thresholds");
    }
  }
  if (doc.contains("enumeration_cap")) {
    const int64_t cap = as_int(doc["enumeration_cap"], "/enumeration_cap");
    if (cap < 1) fail("/enumeration_cap", "must be >= 1");
    config.enumeration_cap = static_cast<std::size_t>(cap);
  }

  try {
    validate_config(config);
  } catch (const ValidationError& e) {
    fail("", e.what());
  }
  return config;
}

json submodular_to_json(const SubmodularSpec& spec) {
  json j;
  switch (spec.kind()) {
    case SubmodularKind::kExplicitTable:
      j["variant"] = "explicit_table";
      j["n"] = spec.n();
      j["values"] = spec.table();
      break;
    case SubmodularKind::kScaledRational:
      j["variant"] = "scaled_rational";
      j["n"] = spec.n();
      j["scaled_values"] = spec.table();
      j["scale"] = spec.scale();
      break;
    case SubmodularKind::kUniformRank:
      j["variant"] = "uniform_rank";
      j["n"] = spec.n();
      j["k"] = spec.rank_k();
      break;
    case SubmodularKind::kPositionAuction: {
      j["variant"] = "position_auction";
      j["agents"] = spec.n();
      json instances = json::array();
      for (const auto& inst : spec.position_spec().instances) {
        json ji;
        ji["qualities"] = inst.qualities;
        ji["interested"] = inst.agents;
        instances.push_back(std::move(ji));
      }
      j["instances"] = std::move(instances);
      break;
    }
    case SubmodularKind::kNetworkCut: {
      const auto& net = spec.network_spec();
      j["variant"] = "network_cut";
      j["nodes"] = net.n_nodes;
      j["source"] = net.source;
      json edges = json::array();
      for (const auto& e : net.edges) edges.push_back({e.from, e.to, e.capacity});
      j["edges"] = std::move(edges);
      j["agent_nodes"] = net.agent_nodes;
      break;
    }
  }
  return j;
}

json distribution_to_json(const DistributionSpec& d) {
  json j;
  switch (d.kind()) {
    case DistKind::kDiscrete: {
      j["kind"] = "discrete";
      json support = json::array();
      for (const auto& a : d.atoms()) support.push_back({a.value, a.prob});
      j["support"] = std::move(support);
      break;
    }
    case DistKind::kUniform:
      j["kind"] = "uniform";
      j["lo"] = d.lo();
      j["hi"] = d.hi();
      break;
    case DistKind::kExponential:
      j["kind"] = "exponential";
      j["rate"] = d.rate();
      break;
  }
  return j;
}

json config_to_json(const ExperimentConfig& config) {
  json doc;
  switch (config.mode) {
    case RunMode::kExperiment:
      doc["mode"] = "experiment";
      break;
    case RunMode::kVerify:
      doc["mode"] = "verify";
      break;
    case RunMode::kMechanism:
      doc["mode"] = "mechanism";
      break;
  }
  doc["submodular"] = submodular_to_json(config.submodular);
  json dists = json::array();
  for (const auto& d : config.distributions) dists.push_back(distribution_to_json(d));
  doc["distributions"] = std::move(dists);
  json adv;
  switch (config.adversary.kind) {
    case AdversaryKind::kFixedOrder:
      adv["kind"] = "fixed";
      adv["order"] = config.adversary.order;
      break;
    case AdversaryKind::kUniformRandomOrder:
      adv["kind"] = "uniform_random";
      break;
    case AdversaryKind::kAdaptiveGreedy:
      adv["kind"] = "adaptive_greedy";
      break;
  }
  doc["adversary"] = std::move(adv);
  json est;
  est["mode"] = config.estimator.mode == EstimatorMode::kExact ? "exact" : "monte_carlo";
  if (config.estimator.mode == EstimatorMode::kMonteCarlo) {
    est["pool"] = config.estimator.pool_size;
  }
  est["cache"] = config.estimator.cache;
  doc["estimator"] = std::move(est);
  doc["trials"] = config.trials;
  doc["seed"] = config.seed;
  doc["objective"] =
      config.objective == MechanismObjective::kWelfare ? "welfare" : "revenue";
  doc["budget"] = config.fuzz_budget;
  doc["mutation"] =
      config.mutation == ThresholdMutation::kNone ? "none" : "halve_thresholds";
  doc["enumeration_cap"] = config.enumeration_cap;
  return doc;
}

json parse_text(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw ValidationError("config is not valid JSON");
  return doc;
}

}  // namespace

ExperimentConfig parse_config_json(const std::string& json_text) {
  return parse_document(parse_text(json_text));
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_json(buffer.str());
}

std::string serialize_config(const ExperimentConfig& config) {
  return config_to_json(config).dump(2);
}

uint64_t config_hash(const ExperimentConfig& config) {
  json doc = config_to_json(config);
  doc.erase("seed");
  const std::string canonical = doc.dump();
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string config_hash_hex(const ExperimentConfig& config) {
  char buf[19];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(config_hash(config)));
  return buf;
}

bool has_sweep(const std::string& json_text) {
  const json doc = parse_text(json_text);
  return doc.is_object() && doc.contains("sweep") && doc["sweep"].is_object() &&
         !doc["sweep"].empty();
}

std::vector<ExperimentConfig> expand_sweep(const std::string& json_text) {
  json doc = parse_text(json_text);
  if (!doc.is_object() || !doc.contains("sweep")) {
    throw ValidationError("config error at /sweep: missing sweep section");
  }
  const json grid = doc["sweep"];
  if (!grid.is_object() || grid.empty()) {
    throw ValidationError("config error at /sweep: empty parameter grid");
  }
  doc.erase("sweep");

  std::vector<std::pair<std::string, json>> axes;
  for (const auto& item : grid.items()) {
    if (!item.value().is_array() || item.value().empty()) {
      throw ValidationError("config error at /sweep/" + item.key() +
                            ": expected a non-empty array of values");
    }
    axes.emplace_back(item.key(), item.value());
  }

  std::vector<ExperimentConfig> cells;
  std::vector<std::size_t> idx(axes.size(), 0);
  for (;;) {
    json cell = doc;
    for (std::size_t a = 0; a < axes.size(); ++a) {
      try {
        cell[json::json_pointer(axes[a].first)] = axes[a].second[idx[a]];
      } catch (const json::exception& e) {
        throw ValidationError("config error at /sweep/" + axes[a].first + ": " + e.what());
      }
    }
    cells.push_back(parse_document(cell));
    std::size_t pos = axes.size();
    bool done = true;
    while (pos > 0) {
      --pos;
      if (++idx[pos] < axes[pos].second.size()) {
        done = false;
        break;
      }
      idx[pos] = 0;
    }
    if (done) break;
  }
  return cells;
}

}  // namespace polyprophet
