#pragma once

#include <memory>
#include <vector>

#include "polyprophet/distribution.hpp"
#include "polyprophet/prophet.hpp"

namespace polyprophet {

enum class AdversaryKind { kFixedOrder, kUniformRandomOrder, kAdaptiveGreedy };

struct AdversarySpec {
  AdversaryKind kind = AdversaryKind::kFixedOrder;
  std::vector<int> order;  // fixed-order permutation of blocks
  bool operator==(const AdversarySpec&) const = default;
};

// Block-restricted adversary policy: picks the next unpresented block from
// the revealed weights only.
//
//   FixedOrder        follows its permutation.
//   UniformRandomOrder a seeded uniformly random permutation per instance.
//   AdaptiveGreedy    a deterministic stress policy. If no weight has been
//                     revealed yet, or the most recent reveal was >= its
//                     distribution's median, it presents the unpresented
//                     block with the smallest mean; after a below-median
//                     reveal it presents the one with the largest mean.
//                     Ties broken by ascending block index.
class AdversaryPolicy : public BlockOrderSource {
 public:
  ~AdversaryPolicy() override = default;
};

// Builds a per-run policy instance. `rng` seeds UniformRandomOrder; the
// distributions feed the adaptive heuristic. Throws ValidationError for a
// fixed order that is not a permutation of the blocks.
std::unique_ptr<AdversaryPolicy> make_policy(const AdversarySpec& spec, int n_blocks,
                                             const std::vector<DistributionSpec>& dists,
                                             RandomSource rng);

// Free-function form: asks the policy for the next block given the
// revealed history. Throws ExhaustedError once all blocks are presented.
int next_block(AdversaryPolicy& policy, const std::vector<int>& presented,
               const std::vector<double>& revealed_weights);

}  // namespace polyprophet
