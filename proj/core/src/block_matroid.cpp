#include "polyprophet/block_matroid.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace polyprophet {

PolymatroidSlack::PolymatroidSlack(const std::vector<int64_t>& value_table, int n)
    : table_(&value_table), n_(n), slack_(value_table.size(), 0), counts_(n, 0) {
  reset_zero();
}

void PolymatroidSlack::reset_zero() {
  std::copy(table_->begin(), table_->end(), slack_.begin());
  std::fill(counts_.begin(), counts_.end(), 0);
}

void PolymatroidSlack::reset(const CardinalityVector& c) {
  reset_zero();
  for (int b = 0; b < n_; ++b) {
    if (c[b] != 0) add(b, c[b]);
  }
}

int64_t PolymatroidSlack::max_addable(int block) const {
  int64_t lo = std::numeric_limits<int64_t>::max();
  const uint32_t bit = 1u << block;
  const uint32_t full = static_cast<uint32_t>(slack_.size());
  for (uint32_t mask = bit; mask < full; ++mask) {
    if (mask & bit) lo = std::min(lo, slack_[mask]);
  }
  return std::max<int64_t>(lo, 0);
}

void PolymatroidSlack::add(int block, int64_t count) {
  const uint32_t bit = 1u << block;
  const uint32_t full = static_cast<uint32_t>(slack_.size());
  for (uint32_t mask = bit; mask < full; ++mask) {
    if (mask & bit) slack_[mask] -= count;
  }
  counts_[block] += static_cast<int>(count);
}

bool PolymatroidSlack::feasible() const {
  for (int c : counts_) {
    if (c < 0) return false;
  }
  for (std::size_t m = 1; m < slack_.size(); ++m) {
    if (slack_[m] < 0) return false;
  }
  return true;
}

BlockMatroid BlockMatroid::build(const SubmodularSpec& spec) {
  const ValidationReport report = validate(spec);
  if (!report.pass()) {
    std::string what = "submodular spec rejected:";
    for (std::size_t i = 0; i < report.violations.size() && i < 3; ++i) {
      what += " " + report.violations[i].describe() + ";";
    }
    throw ValidationError(what);
  }

  BlockMatroid m;
  m.spec_ = spec;
  m.n_ = spec.n();
  const uint32_t full = 1u << m.n_;
  m.table_.resize(full);
  for (uint32_t mask = 0; mask < full; ++mask) m.table_[mask] = spec.evaluate(mask);

  for (const int64_t cap : spec.singleton_caps()) {
    m.block_sizes_.push_back(static_cast<int>(cap));
    m.ground_size_ += static_cast<int>(cap);
  }
  m.rank_ = static_cast<int>(m.table_[full - 1]);
  return m;
}

bool BlockMatroid::within_bounds(const CardinalityVector& c) const {
  if (static_cast<int>(c.size()) != n_) return false;
  for (int b = 0; b < n_; ++b) {
    if (c[b] < 0 || c[b] > block_sizes_[b]) return false;
  }
  return true;
}

bool BlockMatroid::is_independent(const CardinalityVector& c) const {
  if (static_cast<int>(c.size()) != n_) {
    throw PreconditionError("cardinality vector size mismatch");
  }
  Allocation z(c.begin(), c.end());
  return is_member(spec_, z);
}

bool BlockMatroid::is_spanned(int block, const CardinalityVector& c) const {
  if (block < 0 || block >= n_) throw PreconditionError("block out of range");
  if (static_cast<int>(c.size()) != n_) {
    throw PreconditionError("cardinality vector size mismatch");
  }
  // Maximal feasible vector under c, built block by block; spanning is
  // rank-based so the construction order does not matter.
  PolymatroidSlack state(table_, n_);
  for (int b = 0; b < n_; ++b) {
    const int64_t take = std::min<int64_t>(c[b], state.max_addable(b));
    if (take > 0) state.add(b, take);
  }
  return state.max_addable(block) == 0;
}

namespace {

// Blocks in decreasing w', ties by ascending block index. All copies of a
// block sit consecutively in the induced copy order, so the spanning greedy
// can absorb a block's copies as one chunk.
std::vector<int> weight_order(const std::vector<double>& w_prime, int n) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return w_prime[a] > w_prime[b]; });
  return order;
}

}  // namespace

BlockMatroid::Basis BlockMatroid::max_weight_basis(const std::vector<double>& w_prime) const {
  CardinalityVector zero(n_, 0);
  Basis basis;
  basis.counts = remainder(zero, w_prime);
  basis.weight = 0.0;
  for (int b = 0; b < n_; ++b) {
    basis.weight += w_prime[b] * static_cast<double>(basis.counts[b]);
  }
  return basis;
}

CardinalityVector BlockMatroid::remainder(const CardinalityVector& A,
                                          const std::vector<double>& w_prime) const {
  if (static_cast<int>(w_prime.size()) != n_) {
    throw PreconditionError("w' size mismatch");
  }
  if (!within_bounds(A) || !is_independent(A)) {
    throw PreconditionError("remainder requires an independent set");
  }
  PolymatroidSlack state(table_, n_);
  state.reset(A);
  CardinalityVector r(n_, 0);
  for (int b : weight_order(w_prime, n_)) {
    const int64_t room = block_sizes_[b] - A[b];
    const int64_t take = std::min(room, state.max_addable(b));
    if (take > 0) {
      state.add(b, take);
      r[b] = static_cast<int>(take);
    }
  }
  return r;
}

double BlockMatroid::g_value(const CardinalityVector& A,
                             const std::vector<double>& w_prime) const {
  const CardinalityVector r = remainder(A, w_prime);
  double g = 0.0;
  for (int b = 0; b < n_; ++b) g += w_prime[b] * static_cast<double>(r[b]);
  return g;
}

CardinalityVector BlockMatroid::counts_of(const CopySet& s, int n) {
  CardinalityVector c(n, 0);
  for (const auto& ref : s) ++c[ref.block];
  return c;
}

CopySet BlockMatroid::remainder_copies(const CopySet& A,
                                       const std::vector<double>& w_prime) const {
  const CardinalityVector a = counts_of(A, n_);
  const CardinalityVector r = remainder(a, w_prime);
  // Per block, the greedy walks copies in ascending index and takes the first
  // r[b] copies that are not members of A.
  CopySet out;
  for (int b = 0; b < n_; ++b) {
    int needed = r[b];
    for (int copy = 0; copy < block_sizes_[b] && needed > 0; ++copy) {
      if (std::find(A.begin(), A.end(), CopyRef{b, copy}) != A.end()) continue;
      out.push_back({b, copy});
      --needed;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

CopySet BlockMatroid::earliest_remainder(
    const CopySet& A, const std::vector<double>& w_prime,
    const std::vector<std::vector<int>>& presentation_order) const {
  if (static_cast<int>(presentation_order.size()) != n_) {
    throw PreconditionError("presentation order must cover every block");
  }
  for (int b = 0; b < n_; ++b) {
    std::vector<int> seen = presentation_order[b];
    std::sort(seen.begin(), seen.end());
    if (static_cast<int>(seen.size()) != block_sizes_[b]) {
      throw PreconditionError("presentation order incomplete for a block");
    }
    for (int c = 0; c < block_sizes_[b]; ++c) {
      if (seen[c] != c) throw PreconditionError("presentation order not a permutation");
    }
  }
  const CardinalityVector a = counts_of(A, n_);
  const CardinalityVector r = remainder(a, w_prime);
  CopySet out;
  for (int b = 0; b < n_; ++b) {
    for (int k = 0; k < r[b]; ++k) out.push_back({b, presentation_order[b][k]});
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace polyprophet
