#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "specdec/context.hpp"
#include "specdec/dist.hpp"
#include "specdec/model.hpp"
#include "specdec/transform.hpp"

// Independent brute-force checkers for the decoding engine. Everything in
// here recomputes its answer from first principles — no calls into the
// draft/verify/session code paths — so a bug in the engine cannot hide
// inside its own oracle.

namespace specdec::oracle {

// Exact output law of one stochastic verification step, evaluated
// symbolically: law(y) = q(y)·min(1, p(y)/q(y)) + P(reject)·residual(y).
// The lossless-sampling argument says this must equal p exactly.
Distribution exact_step_law(const Distribution& p, const Distribution& q);

struct McResult {
  double tvd_estimate = 0.0;
  bool pass = false;
};

// Empirical TVD between two samplers after n draws each; passes when the
// estimate stays under `threshold`. n must be at least 10k for the default
// threshold to mean anything.
McResult mc_equivalence(const std::function<TokenId()>& sample_a,
                        const std::function<TokenId()>& sample_b, int n,
                        double threshold = 0.02);

// Plain autoregressive argmax decoding of the target — the ground truth
// every greedy pipeline must reproduce token for token.
std::vector<TokenId> reference_greedy_decode(const SequenceModel& target,
                                             const Context& ctx, int max_new_tokens,
                                             std::optional<TokenId> eos_token);

struct CheckResult {
  bool pass = true;
  std::string counterexample;  // first failing transcript, empty on pass
};

// Compare an arbitrary prompt→tokens pipeline against reference greedy
// decoding on every given prompt. Used by the exhaustive check below and as
// a harness for negative controls (hand it a broken pipeline, expect fail).
using GreedyPipeline = std::function<std::vector<TokenId>(const Context&)>;
CheckResult check_pipeline_greedy(const SequenceModel& target,
                                  const std::vector<Context>& prompts,
                                  int max_new_tokens, std::optional<TokenId> eos_token,
                                  const GreedyPipeline& pipeline,
                                  const std::string& label);

// Exhaustively enumerate every prompt of length 0..2 over a small vocabulary
// (≤ 4) and assert that every decoding pipeline — each single source, the
// adaptive ensemble under every policy and criterion, and token trees of
// width 1..min(4, vocab) — reproduces reference greedy decoding exactly.
CheckResult exhaustive_greedy_check(const SequenceModel& target,
                                    const std::vector<DraftSource>& sources,
                                    int gamma, int max_len);

}  // namespace specdec::oracle
