#include "specdec/session.hpp"

#include "specdec/errors.hpp"
#include "emit_util.hpp"

namespace specdec {

DecodeResult decode_session(const SequenceModel& target, const DraftSource& source,
                            const Context& ctx, const DecodeConfig& cfg) {
  if (cfg.gamma < 1) throw BadParams("decode_session: gamma must be >= 1");
  if (cfg.max_new_tokens < 1) throw BadParams("decode_session: max_new_tokens must be >= 1");

  DecodeResult result;
  result.records.config = cfg;
  Context run = ctx;
  Rng rng(cfg.seed);

  bool done = false;
  while (!done) {
    const int start = static_cast<int>(result.tokens.size());
    DraftBlock block = draft_block(source, run, cfg.gamma, cfg.mode, rng);
    VerificationResult vr = cfg.mode == DecodeMode::kGreedy
                                ? verify_greedy(target, run, block)
                                : verify_stochastic(target, run, block, rng);
    done = detail::append_emitted(vr.emitted_tokens, cfg, result.tokens, run);
    result.records.blocks.push_back({start, vr.accepted_count,
                                     static_cast<int>(vr.emitted_tokens.size()),
                                     block.weight_used});
  }
  return result;
}

}  // namespace specdec
