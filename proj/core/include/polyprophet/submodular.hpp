#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polyprophet/errors.hpp"
#include "polyprophet/random.hpp"
#include "polyprophet/rational.hpp"

namespace polyprophet {

enum class SubmodularKind {
  kExplicitTable,
  kUniformRank,
  kPositionAuction,
  kNetworkCut,
  kScaledRational,
};

// One instance of a position auction: descending position qualities and the
// set of agents interested in this instance. Qualities are integers; rational
// inputs go through rationalize_position_auction first.
struct PositionInstance {
  std::vector<int64_t> qualities;  // one per position, non-increasing, >= 0
  std::vector<int> agents;         // interested agents, distinct, 0-based
  bool operator==(const PositionInstance&) const = default;
};

struct PositionAuctionSpec {
  int n_agents = 0;
  std::vector<PositionInstance> instances;
  bool operator==(const PositionAuctionSpec&) const = default;
};

struct CutEdge {
  int from = 0;
  int to = 0;
  int64_t capacity = 0;
  bool operator==(const CutEdge&) const = default;
};

// Capacitated network with a source; each agent owns a disjoint set of
// demand nodes. f(S) is the value of a minimum cut separating the source
// from the demand nodes of S, computed by max-flow.
struct NetworkCutSpec {
  int n_nodes = 0;
  int source = 0;
  std::vector<CutEdge> edges;
  std::vector<std::vector<int>> agent_nodes;  // one set per agent
  bool operator==(const NetworkCutSpec&) const = default;
};

// Integer-valued submodular set-function oracle over ground set {0..n-1}.
// Construction checks structure (sizes, ranges, orderings); semantic
// properties (normalization, monotonicity, submodularity) are checked by
// validate() and enforced where operations require them.
class SubmodularSpec {
 public:
  // Placeholder with an empty ground set; real specs come from the factories.
  SubmodularSpec() = default;

  // values indexed by subset bitmask, 2^n entries, values[0] must be 0.
  static SubmodularSpec explicit_table(int n, std::vector<int64_t> values);
  static SubmodularSpec uniform_rank(int n, int k);
  // `scale` records the factor applied by rationalize_position_auction so
  // allocations can be mapped back to original units.
  static SubmodularSpec position_auction(PositionAuctionSpec spec, int64_t scale = 1);
  static SubmodularSpec network_cut(NetworkCutSpec spec);
  // A rational table already scaled to integers; `scale` is kept so callers
  // can map allocations back to original units.
  static SubmodularSpec scaled_rational(int n, std::vector<int64_t> scaled_values,
                                        int64_t scale);

  int n() const { return n_; }
  SubmodularKind kind() const { return kind_; }
  int64_t scale() const { return scale_; }

  // f(S) for subset bitmask S. Deterministic; O(1) for table-backed variants.
  int64_t evaluate(uint32_t subset_mask) const;

  // (f({0}), ..., f({n-1})): per-element caps, the block sizes of the
  // associated block-structured matroid.
  std::vector<int64_t> singleton_caps() const;

  // f(ground set).
  int64_t total_value() const { return evaluate((n_ >= 32 ? 0u : (1u << n_)) - 1u); }

  // Accessors for serialization / introspection.
  const std::vector<int64_t>& table() const;            // table-backed kinds
  int rank_k() const { return rank_k_; }                // uniform rank
  const PositionAuctionSpec& position_spec() const;     // position auction
  const NetworkCutSpec& network_spec() const;           // network cut

  bool operator==(const SubmodularSpec&) const = default;

 private:
  SubmodularKind kind_ = SubmodularKind::kExplicitTable;
  int n_ = 0;
  int64_t scale_ = 1;
  std::vector<int64_t> values_;  // explicit/scaled tables; network cut cache
  int rank_k_ = 0;
  PositionAuctionSpec position_;
  NetworkCutSpec network_;
};

enum class ViolationKind { kNormalization, kMonotonicity, kSubmodularity };

struct SubmodularViolation {
  ViolationKind kind = ViolationKind::kSubmodularity;
  uint32_t subset = 0;  // S
  int i = -1;
  int j = -1;
  std::string describe() const;
};

struct ValidationReport {
  bool normalized = false;
  bool monotone = false;
  bool submodular = false;
  bool exhaustive = false;  // full check (n <= limit) vs randomized spot check
  std::vector<SubmodularViolation> violations;
  bool pass() const { return normalized && monotone && submodular; }
};

// Checks f(0)=0, monotonicity via all (S, i), and submodularity via the
// diminishing-returns triples (S, i, j). Exhaustive for n <= exhaustive_limit;
// randomized spot checks above. Never throws: the report carries pass/fail.
ValidationReport validate(const SubmodularSpec& spec, int exhaustive_limit = 12,
                          RandomSource* spot_rng = nullptr,
                          int spot_checks = 20'000);

struct RationalizeResult {
  SubmodularSpec spec;
  int64_t scale = 1;
};

// Scales a rational table to integers by the LCM of denominators. The result
// is a kScaledRational spec whose values are scale * f.
RationalizeResult rationalize(int n, const std::vector<Rational>& values);

struct RationalPositionInstance {
  std::vector<Rational> qualities;
  std::vector<int> agents;
};

// Scales rational position-auction qualities by a common denominator.
RationalizeResult rationalize_position_auction(
    int n_agents, const std::vector<RationalPositionInstance>& instances);

}  // namespace polyprophet
