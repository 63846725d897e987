#pragma once

#include <vector>

#include "specdec/context.hpp"
#include "specdec/draft.hpp"
#include "specdec/model.hpp"

namespace specdec {

// Outcome of verifying one drafted block against the target.
// emitted_tokens is the accepted prefix plus exactly one extra token: the
// residual resample (stochastic) or target argmax (greedy) at the first
// rejection, or the bonus token when the whole block is accepted. So its
// length is always accepted_count + 1. target_dists holds the target's
// distribution at each emitted position, conditioned on the realized prefix.
struct VerificationResult {
  int accepted_count = 0;
  std::vector<TokenId> emitted_tokens;
  std::vector<Distribution> target_dists;
};

// Stochastic acceptance: token y at a position with target p and draft q is
// accepted with probability min(1, p(y)/q(y)); the first rejection resamples
// from the normalized positive part of p - q. Full acceptance earns a bonus
// token sampled from p conditioned on the whole block.
VerificationResult verify_stochastic(const SequenceModel& target, const Context& ctx,
                                     const DraftBlock& block, Rng& rng);

// Greedy acceptance: a token is accepted iff it equals the target's argmax
// along the realized chain. Deterministic; output matches target-only greedy
// decoding by construction.
VerificationResult verify_greedy(const SequenceModel& target, const Context& ctx,
                                 const DraftBlock& block);

}  // namespace specdec
