#include "specdec/verify.hpp"

#include <algorithm>

#include "specdec/errors.hpp"

namespace specdec {
namespace {

void check_block(const DraftBlock& block) {
  if (block.tokens.size() != block.ensembled_dists.size() || block.tokens.empty()) {
    throw InconsistentPair("verify: block token/distribution lengths disagree");
  }
}

}  // namespace

VerificationResult verify_stochastic(const SequenceModel& target, const Context& ctx,
                                     const DraftBlock& block, Rng& rng) {
  check_block(block);
  VerificationResult vr;
  Context run = ctx;
  for (int t = 0; t < block.gamma(); ++t) {
    Distribution p = target.next_distribution(run);
    const Distribution& q = block.ensembled_dists[static_cast<std::size_t>(t)];
    const TokenId y = block.tokens[static_cast<std::size_t>(t)];
    const double qy = q[y];
    const double py = p[y];
    // qy > 0 whenever the block really was sampled from q; the ratio guard
    // keeps hand-built blocks from dividing by zero.
    const double accept = qy > 0.0 ? std::min(1.0, py / qy) : (py > 0.0 ? 1.0 : 0.0);
    const double u = rng.next_unit();
    if (u < accept) {
      vr.accepted_count += 1;
      vr.emitted_tokens.push_back(y);
      vr.target_dists.push_back(std::move(p));
      run.append(y);
      continue;
    }
    const Distribution residual = residual_distribution(p, q);
    vr.emitted_tokens.push_back(sample(residual, rng));
    vr.target_dists.push_back(std::move(p));
    return vr;
  }
  // Whole block accepted: bonus token from the target at the next position.
  Distribution bonus = target.next_distribution(run);
  vr.emitted_tokens.push_back(sample(bonus, rng));
  vr.target_dists.push_back(std::move(bonus));
  return vr;
}

VerificationResult verify_greedy(const SequenceModel& target, const Context& ctx,
                                 const DraftBlock& block) {
  check_block(block);
  VerificationResult vr;
  Context run = ctx;
  for (int t = 0; t < block.gamma(); ++t) {
    Distribution p = target.next_distribution(run);
    const TokenId best = p.argmax();
    const TokenId y = block.tokens[static_cast<std::size_t>(t)];
    vr.target_dists.push_back(std::move(p));
    if (y == best) {
      vr.accepted_count += 1;
      vr.emitted_tokens.push_back(y);
      run.append(y);
      continue;
    }
    vr.emitted_tokens.push_back(best);
    return vr;
  }
  Distribution bonus = target.next_distribution(run);
  vr.emitted_tokens.push_back(bonus.argmax());
  vr.target_dists.push_back(std::move(bonus));
  return vr;
}

}  // namespace specdec
