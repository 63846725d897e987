#include "specdec/tabed.hpp"

#include "emit_util.hpp"
#include "specdec/errors.hpp"

namespace specdec {

DraftBlock tabed_draft(const std::vector<DraftSource>& sources, const Context& ctx,
                       int gamma, const HistoryCache& cache, const WeightPolicy& policy,
                       SelectionCriterion criterion, DecodeMode mode, Rng& rng) {
  if (sources.empty()) throw BadParams("tabed_draft: no sources");
  if (gamma < 1) throw BadParams("tabed_draft: gamma must be >= 1");
  const int m = static_cast<int>(sources.size());
  if (cache.num_sources() != m) {
    throw DimensionMismatch("tabed_draft: cache expects " +
                            std::to_string(cache.num_sources()) +
                            " sources, got " + std::to_string(m));
  }

  const WeightVector w = select_weight(cache, policy, criterion);

  DraftBlock block;
  block.weight_used = w;
  block.per_source_dists.resize(static_cast<std::size_t>(m));

  // Each source drafts from its own view of the context; the drafted tokens
  // themselves are shared and appended to every view.
  std::vector<Context> views;
  views.reserve(sources.size());
  for (const DraftSource& s : sources) views.push_back(s.transform(ctx));

  for (int t = 0; t < gamma; ++t) {
    std::vector<Distribution> qs;
    qs.reserve(sources.size());
    for (int i = 0; i < m; ++i) {
      qs.push_back(sources[static_cast<std::size_t>(i)].model->next_distribution(
          views[static_cast<std::size_t>(i)]));
    }
    Distribution q = weighted_average(qs, w);
    const TokenId y = mode == DecodeMode::kGreedy ? q.argmax() : sample(q, rng);
    for (int i = 0; i < m; ++i) {
      block.per_source_dists[static_cast<std::size_t>(i)].push_back(
          std::move(qs[static_cast<std::size_t>(i)]));
      views[static_cast<std::size_t>(i)].append(y);
    }
    block.tokens.push_back(y);
    block.ensembled_dists.push_back(std::move(q));
  }
  return block;
}

DecodeResult tabed_session(const SequenceModel& target,
                           const std::vector<DraftSource>& sources, const Context& ctx,
                           const DecodeConfig& cfg, const TabedOptions& opts) {
  if (cfg.gamma < 1) throw BadParams("tabed_session: gamma must be >= 1");
  if (cfg.max_new_tokens < 1) throw BadParams("tabed_session: max_new_tokens must be >= 1");
  if (sources.empty()) throw BadParams("tabed_session: no sources");

  DecodeResult result;
  result.records.config = cfg;
  Context run = ctx;
  Rng rng(cfg.seed);
  HistoryCache cache(static_cast<int>(sources.size()), opts.window);

  bool done = false;
  while (!done) {
    const int start = static_cast<int>(result.tokens.size());
    DraftBlock block = tabed_draft(sources, run, cfg.gamma, cache, opts.policy,
                                   opts.criterion, cfg.mode, rng);
    VerificationResult vr = cfg.mode == DecodeMode::kGreedy
                                ? verify_greedy(target, run, block)
                                : verify_stochastic(target, run, block, rng);
    update_history(cache, block, vr, start);
    done = detail::append_emitted(vr.emitted_tokens, cfg, result.tokens, run);
    result.records.blocks.push_back({start, vr.accepted_count,
                                     static_cast<int>(vr.emitted_tokens.size()),
                                     block.weight_used});
  }
  return result;
}

}  // namespace specdec
