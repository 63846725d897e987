#pragma once

#include <vector>

#include "specdec/context.hpp"
#include "specdec/records.hpp"
#include "specdec/transform.hpp"

namespace specdec {

// One drafted block of gamma tokens plus everything verification and
// history bookkeeping need afterwards.
struct DraftBlock {
  std::vector<TokenId> tokens;
  // Drafting distribution each token was drawn from, one per position.
  std::vector<Distribution> ensembled_dists;
  // per_source_dists[i][t] = source i's distribution at block position t.
  // Single-source drafting has one row, identical to ensembled_dists.
  std::vector<std::vector<Distribution>> per_source_dists;
  WeightVector weight_used = WeightVector::uniform(1);

  int gamma() const { return static_cast<int>(tokens.size()); }
  int num_sources() const { return static_cast<int>(per_source_dists.size()); }
};

// Autoregressively draft gamma tokens from a single source on its
// transformed view of ctx. Greedy mode takes the argmax each step;
// stochastic mode samples. rng is untouched in greedy mode.
DraftBlock draft_block(const DraftSource& source, const Context& ctx, int gamma,
                       DecodeMode mode, Rng& rng);

}  // namespace specdec
