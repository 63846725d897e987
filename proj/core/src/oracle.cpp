#include "specdec/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "specdec/errors.hpp"
#include "specdec/session.hpp"
#include "specdec/tabed.hpp"
#include "specdec/tree.hpp"

namespace specdec::oracle {
namespace {

std::string show_tokens(const std::vector<TokenId>& tokens) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) os << ' ';
    os << tokens[i];
  }
  os << ']';
  return os.str();
}

}  // namespace

Distribution exact_step_law(const Distribution& p, const Distribution& q) {
  if (p.vocab_size() != q.vocab_size()) {
    throw DimensionMismatch("exact_step_law: vocab sizes differ");
  }
  const int vocab = p.vocab_size();

  // All three ingredients recomputed from raw probabilities on purpose —
  // this function must not lean on the engine's residual/acceptance code.
  double reject_mass = 0.0;
  std::vector<double> accept_part(static_cast<std::size_t>(vocab), 0.0);
  std::vector<double> residual(static_cast<std::size_t>(vocab), 0.0);
  double residual_mass = 0.0;
  for (int y = 0; y < vocab; ++y) {
    const double py = p[y];
    const double qy = q[y];
    const double accept = qy > 0.0 ? std::min(1.0, py / qy) : 0.0;
    accept_part[static_cast<std::size_t>(y)] = qy * accept;
    reject_mass += qy * (1.0 - accept);
    const double r = py - qy;
    if (r > 0.0) {
      residual[static_cast<std::size_t>(y)] = r;
      residual_mass += r;
    }
  }

  std::vector<double> law = accept_part;
  if (residual_mass > 0.0) {
    for (int y = 0; y < vocab; ++y) {
      law[static_cast<std::size_t>(y)] +=
          reject_mass * residual[static_cast<std::size_t>(y)] / residual_mass;
    }
  }
  return Distribution(std::move(law));
}

McResult mc_equivalence(const std::function<TokenId()>& sample_a,
                        const std::function<TokenId()>& sample_b, int n,
                        double threshold) {
  if (n < 10000) throw BadParams("mc_equivalence: n must be >= 10000");
  std::map<TokenId, long> counts_a;
  std::map<TokenId, long> counts_b;
  for (int i = 0; i < n; ++i) ++counts_a[sample_a()];
  for (int i = 0; i < n; ++i) ++counts_b[sample_b()];

  double tvd_acc = 0.0;
  auto it_a = counts_a.begin();
  auto it_b = counts_b.begin();
  while (it_a != counts_a.end() || it_b != counts_b.end()) {
    long ca = 0;
    long cb = 0;
    if (it_b == counts_b.end() || (it_a != counts_a.end() && it_a->first < it_b->first)) {
      ca = (it_a++)->second;
    } else if (it_a == counts_a.end() || it_b->first < it_a->first) {
      cb = (it_b++)->second;
    } else {
      ca = (it_a++)->second;
      cb = (it_b++)->second;
    }
    tvd_acc += std::abs(static_cast<double>(ca) - static_cast<double>(cb));
  }
  McResult result;
  result.tvd_estimate = 0.5 * tvd_acc / static_cast<double>(n);
  result.pass = result.tvd_estimate < threshold;
  return result;
}

std::vector<TokenId> reference_greedy_decode(const SequenceModel& target,
                                             const Context& ctx, int max_new_tokens,
                                             std::optional<TokenId> eos_token) {
  std::vector<TokenId> out;
  Context run = ctx;
  while (static_cast<int>(out.size()) < max_new_tokens) {
    const TokenId y = target.next_distribution(run).argmax();
    out.push_back(y);
    run.append(y);
    if (eos_token && y == *eos_token) break;
  }
  return out;
}

CheckResult check_pipeline_greedy(const SequenceModel& target,
                                  const std::vector<Context>& prompts,
                                  int max_new_tokens, std::optional<TokenId> eos_token,
                                  const GreedyPipeline& pipeline,
                                  const std::string& label) {
  for (const Context& prompt : prompts) {
    const std::vector<TokenId> expected =
        reference_greedy_decode(target, prompt, max_new_tokens, eos_token);
    const std::vector<TokenId> got = pipeline(prompt);
    if (got != expected) {
      std::ostringstream os;
      os << label << ": prompt " << show_tokens(prompt.flatten()) << " expected "
         << show_tokens(expected) << " got " << show_tokens(got);
      return CheckResult{false, os.str()};
    }
  }
  return CheckResult{};
}

CheckResult exhaustive_greedy_check(const SequenceModel& target,
                                    const std::vector<DraftSource>& sources,
                                    int gamma, int max_len) {
  const int vocab = target.vocab_size();
  if (vocab > 4) throw BadParams("exhaustive_greedy_check: vocab must be <= 4");
  if (sources.empty()) throw BadParams("exhaustive_greedy_check: no sources");
  if (gamma < 1 || gamma > 4) throw BadParams("exhaustive_greedy_check: gamma outside [1, 4]");
  if (max_len < 1 || max_len > 16) {
    throw BadParams("exhaustive_greedy_check: max_len outside [1, 16]");
  }

  // Every prompt of length 0, 1 and 2 over the vocabulary.
  std::vector<Context> prompts;
  prompts.push_back(text_prompt({}));
  for (TokenId a = 0; a < vocab; ++a) {
    prompts.push_back(text_prompt({a}));
    for (TokenId b = 0; b < vocab; ++b) {
      prompts.push_back(text_prompt({a, b}));
    }
  }

  DecodeConfig cfg;
  cfg.gamma = gamma;
  cfg.mode = DecodeMode::kGreedy;
  cfg.max_new_tokens = max_len;
  cfg.seed = 0;
  const int m = static_cast<int>(sources.size());

  auto run_check = [&](const GreedyPipeline& pipeline, const std::string& label) {
    return check_pipeline_greedy(target, prompts, max_len, std::nullopt, pipeline, label);
  };

  // Single-source linear decoding, one pipeline per source.
  for (int i = 0; i < m; ++i) {
    const CheckResult r = run_check(
        [&, i](const Context& prompt) {
          return decode_session(target, sources[static_cast<std::size_t>(i)], prompt, cfg)
              .tokens;
        },
        "single[" + sources[static_cast<std::size_t>(i)].name + "]");
    if (!r.pass) return r;
  }

  // Adaptive ensemble, every policy x criterion. The grid ladder is defined
  // for two sources only.
  std::vector<std::pair<WeightPolicy, std::string>> policies = {
      {WeightPolicy::softmax(1.0), "softmax"},
      {WeightPolicy::adaboost(1.0), "adaboost"},
  };
  if (m == 2) policies.push_back({WeightPolicy::grid(10), "grid"});
  const std::vector<std::pair<SelectionCriterion, std::string>> criteria = {
      {SelectionCriterion::kSoftKl, "soft_kl"},
      {SelectionCriterion::kSoftTvd, "soft_tvd"},
      {SelectionCriterion::kHardMatch, "hard_match"},
  };
  for (const auto& [policy, pname] : policies) {
    for (const auto& [criterion, cname] : criteria) {
      TabedOptions opts;
      opts.policy = policy;
      opts.criterion = criterion;
      const CheckResult r = run_check(
          [&, opts](const Context& prompt) {
            return tabed_session(target, sources, prompt, cfg, opts).tokens;
          },
          "tabed[" + pname + "," + cname + "]");
      if (!r.pass) return r;
    }
  }

  // Token trees: every width up to min(4, vocab), single-source and ensembled.
  for (int width = 1; width <= std::min(4, vocab); ++width) {
    for (int i = 0; i < m; ++i) {
      TreeSessionOptions topts;
      topts.width = width;
      const CheckResult r = run_check(
          [&, i, topts](const Context& prompt) {
            return tree_session(target,
                                {sources[static_cast<std::size_t>(i)]}, prompt, cfg,
                                topts)
                .tokens;
          },
          "tree[d=" + std::to_string(width) + "," +
              sources[static_cast<std::size_t>(i)].name + "]");
      if (!r.pass) return r;
    }
    TreeSessionOptions topts;
    topts.width = width;
    TabedOptions ensemble;
    ensemble.policy = m == 2 ? WeightPolicy::grid(10) : WeightPolicy::softmax(1.0);
    ensemble.criterion = SelectionCriterion::kSoftKl;
    topts.tabed = ensemble;
    const CheckResult r = run_check(
        [&, topts](const Context& prompt) {
          return tree_session(target, sources, prompt, cfg, topts).tokens;
        },
        "tree[d=" + std::to_string(width) + ",ensemble]");
    if (!r.pass) return r;
  }

  return CheckResult{};
}

}  // namespace specdec::oracle
