#pragma once

#include <cstdint>
#include <vector>

#include "polyprophet/distribution.hpp"
#include "polyprophet/polymatroid.hpp"
#include "polyprophet/submodular.hpp"

namespace polyprophet {

// Per-block copy counts |S ∩ B_i|. Independence of a copy set depends only
// on this vector, so most operations work at count granularity.
using CardinalityVector = std::vector<int>;

// A specific copy of a block, for the few operations that need copy identity.
struct CopyRef {
  int block = 0;
  int copy = 0;  // in [0, M_block)
  bool operator==(const CopyRef&) const = default;
  auto operator<=>(const CopyRef&) const = default;
};
using CopySet = std::vector<CopyRef>;  // kept sorted and duplicate-free

// Incremental view of the polymatroid constraints: tracks
// slack[S] = f(S) - c(S) for every nonempty subset S while copies are added
// block by block. Lets the greedy routines test "can one more copy of block b
// be absorbed" in O(2^(n-1)).
class PolymatroidSlack {
 public:
  explicit PolymatroidSlack(const std::vector<int64_t>& value_table, int n);

  // Re-bases on counts c. Counts need not be feasible.
  void reset(const CardinalityVector& c);
  void reset_zero();

  // Largest k with current counts + k*e_b in P_f (ignores block size caps).
  int64_t max_addable(int block) const;
  void add(int block, int64_t count);

  const CardinalityVector& counts() const { return counts_; }
  bool feasible() const;  // all slacks >= 0 and counts >= 0

 private:
  const std::vector<int64_t>* table_;
  int n_;
  std::vector<int64_t> slack_;
  CardinalityVector counts_;
};

// The block-structured matroid associated with an integer polymatroid:
// ground set has M_i = f({u_i}) copies of element u_i, and a copy set S is
// independent iff its cardinality vector lies in P_f. Block sizes use the
// per-element caps rather than a uniform bound; any feasible vector has
// counts_i <= f({u_i}), so the two constructions have identical independent
// cardinality vectors (tested).
class BlockMatroid {
 public:
  // Validates the spec (normalized, monotone, submodular; exhaustively for
  // n <= 12, spot-checked above) and precomputes the value table.
  static BlockMatroid build(const SubmodularSpec& spec);

  const SubmodularSpec& spec() const { return spec_; }
  int num_blocks() const { return n_; }
  const std::vector<int>& block_sizes() const { return block_sizes_; }
  int block_size(int b) const { return block_sizes_[b]; }
  int ground_size() const { return ground_size_; }
  int rank() const { return rank_; }
  const std::vector<int64_t>& value_table() const { return table_; }

  bool within_bounds(const CardinalityVector& c) const;

  // Independence of any copy set with these counts: c ∈ P_f.
  // Delegates to the subset-enumeration membership test.
  bool is_independent(const CardinalityVector& c) const;

  // Whether one more copy of `block` is spanned by (any maximal independent
  // subset of) the copy multiset c: true iff block lies in a tight set of the
  // maximal feasible vector under c.
  bool is_spanned(int block, const CardinalityVector& c) const;

  struct Basis {
    CardinalityVector counts;
    double weight = 0.0;
  };

  // Max-weight basis under per-block weights w' (copies of a block share its
  // weight). Greedy over copies in decreasing w', ties broken by ascending
  // (block, copy).
  Basis max_weight_basis(const std::vector<double>& w_prime) const;

  // R(A): completes independent A to a basis using elements of the max-weight
  // basis B, maximizing w'(R). Computed by the spanning greedy: walk the
  // ground set in decreasing w' (ties by block then copy) and take every copy
  // not spanned by A together with the earlier copies. Returned as per-block
  // counts. Throws PreconditionError if A is dependent.
  CardinalityVector remainder(const CardinalityVector& A,
                              const std::vector<double>& w_prime) const;

  // g(A) = w'(R(A)).
  double g_value(const CardinalityVector& A, const std::vector<double>& w_prime) const;

  // Copy-level remainder for an explicit copy set A; the selected copies of
  // each block are the lowest-indexed ones outside A.
  CopySet remainder_copies(const CopySet& A, const std::vector<double>& w_prime) const;

  // R'(A): same per-block counts as R(A), taking the earliest copies of each
  // block under the given presentation order. presentation_order[b] must list
  // every copy of block b exactly once.
  CopySet earliest_remainder(const CopySet& A, const std::vector<double>& w_prime,
                             const std::vector<std::vector<int>>& presentation_order) const;

  CardinalityVector zero_vector() const { return CardinalityVector(n_, 0); }

  static CardinalityVector counts_of(const CopySet& s, int n);

 private:
  BlockMatroid() = default;

  SubmodularSpec spec_;
  int n_ = 0;
  std::vector<int> block_sizes_;
  int ground_size_ = 0;
  int rank_ = 0;
  std::vector<int64_t> table_;
};

}  // namespace polyprophet
