#include "specdec/draft.hpp"

#include "specdec/errors.hpp"

namespace specdec {

DraftBlock draft_block(const DraftSource& source, const Context& ctx, int gamma,
                       DecodeMode mode, Rng& rng) {
  if (gamma < 1) throw BadParams("draft_block: gamma must be >= 1");
  DraftBlock block;
  block.tokens.reserve(static_cast<std::size_t>(gamma));
  block.ensembled_dists.reserve(static_cast<std::size_t>(gamma));

  Context view = source.transform(ctx);
  for (int t = 0; t < gamma; ++t) {
    Distribution q = source.model->next_distribution(view);
    const TokenId y = mode == DecodeMode::kGreedy ? q.argmax() : sample(q, rng);
    block.tokens.push_back(y);
    block.ensembled_dists.push_back(std::move(q));
    view.append(y);
  }
  block.per_source_dists.push_back(block.ensembled_dists);
  block.weight_used = WeightVector::uniform(1);
  return block;
}

}  // namespace specdec
