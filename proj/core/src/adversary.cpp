#include "polyprophet/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace polyprophet {

namespace {

std::vector<bool> presented_mask(const std::vector<int>& presented, int n) {
  std::vector<bool> mask(n, false);
  for (int b : presented) {
    if (b >= 0 && b < n) mask[b] = true;
  }
  return mask;
}

class FixedOrderPolicy final : public AdversaryPolicy {
 public:
  explicit FixedOrderPolicy(std::vector<int> order) : order_(std::move(order)) {}

  int next_block(const std::vector<int>& presented,
                 const std::vector<double>& /*revealed*/) override {
    if (presented.size() >= order_.size()) {
      throw ExhaustedError("all blocks already presented");
    }
    return order_[presented.size()];
  }

 private:
  std::vector<int> order_;
};

class AdaptiveGreedyPolicy final : public AdversaryPolicy {
 public:
  AdaptiveGreedyPolicy(int n, std::vector<double> means, std::vector<double> medians)
      : n_(n), means_(std::move(means)), medians_(std::move(medians)) {}

  int next_block(const std::vector<int>& presented,
                 const std::vector<double>& revealed) override {
    if (static_cast<int>(presented.size()) >= n_) {
      throw ExhaustedError("all blocks already presented");
    }
    // Last real reveal decides the stance: below-median => dangle the richest
    // remaining block, otherwise lead with the poorest one.
    bool below_median = false;
    bool any_reveal = false;
    for (std::size_t i = revealed.size(); i-- > 0;) {
      if (std::isnan(revealed[i])) continue;
      any_reveal = true;
      below_median = revealed[i] < medians_[presented[i]];
      break;
    }
    const bool pick_max = any_reveal && below_median;

    const auto mask = presented_mask(presented, n_);
    int best = -1;
    for (int b = 0; b < n_; ++b) {
      if (mask[b]) continue;
      if (best < 0) {
        best = b;
        continue;
      }
      if (pick_max ? means_[b] > means_[best] : means_[b] < means_[best]) best = b;
    }
    return best;
  }

 private:
  int n_;
  std::vector<double> means_;
  std::vector<double> medians_;
};

}  // namespace

std::unique_ptr<AdversaryPolicy> make_policy(const AdversarySpec& spec, int n_blocks,
                                             const std::vector<DistributionSpec>& dists,
                                             RandomSource rng) {
  switch (spec.kind) {
    case AdversaryKind::kFixedOrder: {
      if (static_cast<int>(spec.order.size()) != n_blocks) {
        throw ValidationError("fixed order must cover every block");
      }
      std::vector<int> sorted = spec.order;
      std::sort(sorted.begin(), sorted.end());
      for (int b = 0; b < n_blocks; ++b) {
        if (sorted[b] != b) throw ValidationError("fixed order must be a permutation");
      }
      return std::make_unique<FixedOrderPolicy>(spec.order);
    }
    case AdversaryKind::kUniformRandomOrder: {
      std::vector<int> perm(n_blocks);
      std::iota(perm.begin(), perm.end(), 0);
      for (int i = n_blocks - 1; i > 0; --i) {
        const int j = static_cast<int>(rng.next_below(static_cast<uint64_t>(i) + 1));
        std::swap(perm[i], perm[j]);
      }
      return std::make_unique<FixedOrderPolicy>(std::move(perm));
    }
    case AdversaryKind::kAdaptiveGreedy: {
      if (static_cast<int>(dists.size()) != n_blocks) {
        throw ValidationError("adaptive policy needs one distribution per block");
      }
      std::vector<double> means, medians;
      for (const auto& d : dists) {
        means.push_back(d.mean());
        medians.push_back(d.median());
      }
      return std::make_unique<AdaptiveGreedyPolicy>(n_blocks, std::move(means),
                                                    std::move(medians));
    }
  }
  throw ValidationError("unknown adversary kind");
}

int next_block(AdversaryPolicy& policy, const std::vector<int>& presented,
               const std::vector<double>& revealed_weights) {
  return policy.next_block(presented, revealed_weights);
}

}  // namespace polyprophet
