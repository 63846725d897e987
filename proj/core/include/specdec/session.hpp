#pragma once

#include "specdec/context.hpp"
#include "specdec/draft.hpp"
#include "specdec/model.hpp"
#include "specdec/records.hpp"
#include "specdec/verify.hpp"

namespace specdec {

// Full speculative decoding loop with a single draft source: draft a block,
// verify it, append, repeat until an EOS token is emitted or max_new_tokens
// is reached. In greedy mode the result is token-identical to decoding the
// target alone.
DecodeResult decode_session(const SequenceModel& target, const DraftSource& source,
                            const Context& ctx, const DecodeConfig& cfg);

}  // namespace specdec
