#include "polyprophet/submodular.hpp"

#include <algorithm>
#include <bit>

#include "polyprophet/maxflow.hpp"

namespace polyprophet {

namespace {

constexpr int kMaskLimit = 24;      // subset bitmask representation cap
constexpr int kNetworkCutLimit = 16;  // 2^n flow computations at build

void check_n(int n, int limit = kMaskLimit) {
  if (n < 1) throw ValidationError("ground set must be non-empty");
  if (n > limit) {
    throw TooLarge("ground set of size " + std::to_string(n) + " exceeds cap " +
                   std::to_string(limit));
  }
}

// f(S) for a position auction: per instance, the sum of the top |S ∩ Γ(k)|
// qualities. This is the transversal-polymatroid value of serving S; it is
// cross-checked against a brute-force assignment oracle in the tests.
int64_t position_value(const PositionAuctionSpec& spec, uint32_t mask) {
  int64_t total = 0;
  for (const auto& inst : spec.instances) {
    int hits = 0;
    for (int a : inst.agents) {
      if (mask & (1u << a)) ++hits;
    }
    for (int j = 0; j < hits; ++j) total += inst.qualities[j];
  }
  return total;
}

std::vector<int64_t> build_cut_table(const NetworkCutSpec& spec) {
  const int n = static_cast<int>(spec.agent_nodes.size());
  // super-sink at index n_nodes
  const int sink = spec.n_nodes;
  std::vector<int64_t> table(std::size_t{1} << n, 0);
  int64_t total_cap = 0;
  for (const auto& e : spec.edges) total_cap += e.capacity;
  // rebuild per mask: sink hookups differ
  for (uint32_t mask = 1; mask < table.size(); ++mask) {
    MaxFlowGraph g(spec.n_nodes + 1);
    for (const auto& e : spec.edges) g.add_edge(e.from, e.to, e.capacity);
    for (int a = 0; a < n; ++a) {
      if (!(mask & (1u << a))) continue;
      for (int node : spec.agent_nodes[a]) g.add_edge(node, sink, total_cap + 1);
    }
    table[mask] = g.max_flow(spec.source, sink);
  }
  return table;
}

}  // namespace

SubmodularSpec SubmodularSpec::explicit_table(int n, std::vector<int64_t> values) {
  check_n(n);
  if (values.size() != (std::size_t{1} << n)) {
    throw ValidationError("explicit table needs 2^n values");
  }
  for (int64_t v : values) {
    if (v < 0) throw ValidationError("table values must be non-negative integers");
  }
  SubmodularSpec s;
  s.kind_ = SubmodularKind::kExplicitTable;
  s.n_ = n;
  s.values_ = std::move(values);
  return s;
}

SubmodularSpec SubmodularSpec::uniform_rank(int n, int k) {
  check_n(n);
  if (k < 0 || k > n) throw ValidationError("uniform rank requires 0 <= k <= n");
  SubmodularSpec s;
  s.kind_ = SubmodularKind::kUniformRank;
  s.n_ = n;
  s.rank_k_ = k;
  return s;
}

SubmodularSpec SubmodularSpec::position_auction(PositionAuctionSpec spec, int64_t scale) {
  check_n(spec.n_agents);
  if (scale <= 0) throw ValidationError("scale must be a positive integer");
  for (const auto& inst : spec.instances) {
    if (inst.qualities.size() != inst.agents.size()) {
      throw ValidationError("instance needs exactly |interested agents| qualities");
    }
    for (std::size_t j = 0; j < inst.qualities.size(); ++j) {
      if (inst.qualities[j] < 0) throw ValidationError("qualities must be >= 0");
      if (j > 0 && inst.qualities[j] > inst.qualities[j - 1]) {
        throw ValidationError("qualities must be non-increasing");
      }
    }
    std::vector<int> agents = inst.agents;
    std::sort(agents.begin(), agents.end());
    for (std::size_t j = 0; j < agents.size(); ++j) {
      if (agents[j] < 0 || agents[j] >= spec.n_agents) {
        throw ValidationError("interested agent out of range");
      }
      if (j > 0 && agents[j] == agents[j - 1]) {
        throw ValidationError("duplicate agent in interest set");
      }
    }
  }
  SubmodularSpec s;
  s.kind_ = SubmodularKind::kPositionAuction;
  s.n_ = spec.n_agents;
  s.scale_ = scale;
  s.position_ = std::move(spec);
  return s;
}

SubmodularSpec SubmodularSpec::network_cut(NetworkCutSpec spec) {
  const int n = static_cast<int>(spec.agent_nodes.size());
  check_n(n, kNetworkCutLimit);
  if (spec.n_nodes < 1) throw ValidationError("network needs at least one node");
  if (spec.source < 0 || spec.source >= spec.n_nodes) {
    throw ValidationError("source node out of range");
  }
  for (const auto& e : spec.edges) {
    if (e.from < 0 || e.from >= spec.n_nodes || e.to < 0 || e.to >= spec.n_nodes) {
      throw ValidationError("edge endpoint out of range");
    }
    if (e.capacity <= 0) throw ValidationError("capacities must be positive integers");
  }
  std::vector<bool> claimed(spec.n_nodes, false);
  for (const auto& nodes : spec.agent_nodes) {
    if (nodes.empty()) throw ValidationError("agent with empty demand-node set");
    for (int node : nodes) {
      if (node < 0 || node >= spec.n_nodes) throw ValidationError("demand node out of range");
      if (node == spec.source) throw ValidationError("demand sets must exclude the source");
      if (claimed[node]) throw ValidationError("demand-node sets must be disjoint");
      claimed[node] = true;
    }
  }
  SubmodularSpec s;
  s.kind_ = SubmodularKind::kNetworkCut;
  s.n_ = n;
  s.values_ = build_cut_table(spec);
  s.network_ = std::move(spec);
  return s;
}

SubmodularSpec SubmodularSpec::scaled_rational(int n, std::vector<int64_t> scaled_values,
                                               int64_t scale) {
  if (scale <= 0) throw ValidationError("scale must be a positive integer");
  SubmodularSpec s = explicit_table(n, std::move(scaled_values));
  s.kind_ = SubmodularKind::kScaledRational;
  s.scale_ = scale;
  return s;
}

int64_t SubmodularSpec::evaluate(uint32_t subset_mask) const {
  if (n_ < 32 && subset_mask >= (1u << n_)) {
    throw PreconditionError("subset mask out of range");
  }
  switch (kind_) {
    case SubmodularKind::kExplicitTable:
    case SubmodularKind::kScaledRational:
    case SubmodularKind::kNetworkCut:
      return values_[subset_mask];
    case SubmodularKind::kUniformRank:
      return std::min<int64_t>(std::popcount(subset_mask), rank_k_);
    case SubmodularKind::kPositionAuction:
      return position_value(position_, subset_mask);
  }
  return 0;
}

std::vector<int64_t> SubmodularSpec::singleton_caps() const {
  std::vector<int64_t> caps(n_);
  for (int i = 0; i < n_; ++i) caps[i] = evaluate(1u << i);
  return caps;
}

const std::vector<int64_t>& SubmodularSpec::table() const {
  if (values_.empty()) throw PreconditionError("spec has no stored value table");
  return values_;
}

const PositionAuctionSpec& SubmodularSpec::position_spec() const {
  if (kind_ != SubmodularKind::kPositionAuction) {
    throw PreconditionError("not a position auction spec");
  }
  return position_;
}

const NetworkCutSpec& SubmodularSpec::network_spec() const {
  if (kind_ != SubmodularKind::kNetworkCut) {
    throw PreconditionError("not a network cut spec");
  }
  return network_;
}

std::string SubmodularViolation::describe() const {
  switch (kind) {
    case ViolationKind::kNormalization:
      return "f(empty) != 0";
    case ViolationKind::kMonotonicity:
      return "f(S+{" + std::to_string(i) + "}) < f(S) at S=" + std::to_string(subset);
    case ViolationKind::kSubmodularity:
      return "marginal of " + std::to_string(i) + " grows when adding " +
             std::to_string(j) + " at S=" + std::to_string(subset);
  }
  return "";
}

namespace {

bool check_triple(const SubmodularSpec& f, uint32_t s, int i, int j,
                  std::vector<SubmodularViolation>& out) {
  const int64_t base = f.evaluate(s);
  const int64_t with_i = f.evaluate(s | (1u << i));
  const int64_t with_j = f.evaluate(s | (1u << j));
  const int64_t with_ij = f.evaluate(s | (1u << i) | (1u << j));
  if (with_i - base < with_ij - with_j) {
    out.push_back({ViolationKind::kSubmodularity, s, i, j});
    return false;
  }
  return true;
}

}  // namespace

ValidationReport validate(const SubmodularSpec& spec, int exhaustive_limit,
                          RandomSource* spot_rng, int spot_checks) {
  ValidationReport report;
  const int n = spec.n();
  report.normalized = spec.evaluate(0) == 0;
  if (!report.normalized) {
    report.violations.push_back({ViolationKind::kNormalization, 0, -1, -1});
  }
  report.monotone = true;
  report.submodular = true;

  if (n <= exhaustive_limit) {
    report.exhaustive = true;
    const uint32_t full = (n >= 32 ? 0u : (1u << n));
    for (uint32_t s = 0; s < full; ++s) {
      for (int i = 0; i < n; ++i) {
        if (s & (1u << i)) continue;
        if (spec.evaluate(s | (1u << i)) < spec.evaluate(s)) {
          report.monotone = false;
          report.violations.push_back({ViolationKind::kMonotonicity, s, i, -1});
        }
        for (int j = i + 1; j < n; ++j) {
          if (s & (1u << j)) continue;
          if (!check_triple(spec, s, i, j, report.violations)) {
            report.submodular = false;
          }
        }
      }
    }
    return report;
  }

  // Randomized spot check above the exhaustive limit.
  RandomSource local(0xb10cbeef, 0);
  RandomSource& rng = spot_rng != nullptr ? *spot_rng : local;
  const uint32_t full_mask = (n >= 32 ? ~0u : ((1u << n) - 1u));
  for (int c = 0; c < spot_checks; ++c) {
    const uint32_t s = static_cast<uint32_t>(rng.next_u64()) & full_mask;
    const int i = static_cast<int>(rng.next_below(n));
    const int j = static_cast<int>(rng.next_below(n));
    if (i == j) continue;
    const uint32_t base = s & ~(1u << i) & ~(1u << j);
    if (spec.evaluate(base | (1u << i)) < spec.evaluate(base)) {
      report.monotone = false;
      report.violations.push_back(
          {ViolationKind::kMonotonicity, base, i, -1});
    }
    if (!check_triple(spec, base, i, j, report.violations)) {
      report.submodular = false;
    }
  }
  return report;
}

RationalizeResult rationalize(int n, const std::vector<Rational>& values) {
  check_n(n);
  if (values.size() != (std::size_t{1} << n)) {
    throw ValidationError("rational table needs 2^n values");
  }
  int64_t scale = 1;
  for (const auto& v : values) scale = lcm_checked(scale, v.den);
  std::vector<int64_t> scaled(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    scaled[i] = values[i].scaled(scale);
    if (scaled[i] < 0) throw ValidationError("rational table values must be >= 0");
  }
  return {SubmodularSpec::scaled_rational(n, std::move(scaled), scale), scale};
}

RationalizeResult rationalize_position_auction(
    int n_agents, const std::vector<RationalPositionInstance>& instances) {
  int64_t scale = 1;
  for (const auto& inst : instances) {
    for (const auto& q : inst.qualities) scale = lcm_checked(scale, q.den);
  }
  PositionAuctionSpec out;
  out.n_agents = n_agents;
  for (const auto& inst : instances) {
    PositionInstance pi;
    pi.agents = inst.agents;
    for (const auto& q : inst.qualities) pi.qualities.push_back(q.scaled(scale));
    out.instances.push_back(std::move(pi));
  }
  return {SubmodularSpec::position_auction(std::move(out), scale), scale};
}

}  // namespace polyprophet
