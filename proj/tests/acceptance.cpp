// Acceptance gate for the decoding engine: every check below prints exactly
// one PASS/FAIL line. The binary exits non-zero when any check fails.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "specdec/draft.hpp"
#include "specdec/experiment.hpp"
#include "specdec/metrics.hpp"
#include "specdec/oracle.hpp"
#include "specdec/session.hpp"
#include "specdec/tabed.hpp"
#include "specdec/tree.hpp"
#include "specdec/verify.hpp"

using namespace specdec;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::filesystem::path fixture_dir() {
  return std::filesystem::path(SPECDEC_FIXTURE_DIR);
}

std::string format(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  return buf;
}

Distribution random_distribution(Rng& rng, int vocab, double sparsity) {
  std::vector<double> w(static_cast<std::size_t>(vocab));
  double total = 0.0;
  for (auto& v : w) {
    double x = rng.next_unit() + 1e-9;
    if (sparsity > 0.0 && rng.next_unit() < sparsity) x = 0.0;
    v = x;
    total += x;
  }
  if (total <= 0.0) {
    w[static_cast<std::size_t>(rng.next_u64() % vocab)] = 1.0;
    total = 1.0;
  }
  for (auto& v : w) v /= total;
  return Distribution(std::move(w));
}

std::vector<std::vector<TokenId>> random_corpus(Rng& rng, int vocab, int docs,
                                                int doc_len) {
  std::vector<std::vector<TokenId>> corpus;
  for (int d = 0; d < docs; ++d) {
    std::vector<TokenId> doc;
    for (int i = 0; i < doc_len; ++i) {
      doc.push_back(static_cast<TokenId>(rng.next_u64() % vocab));
    }
    corpus.push_back(std::move(doc));
  }
  return corpus;
}

class ConstModel : public SequenceModel {
 public:
  explicit ConstModel(Distribution dist) : dist_(std::move(dist)) {}
  int vocab_size() const override { return dist_.vocab_size(); }
  Distribution next_distribution(const Context&) const override { return dist_; }

 private:
  Distribution dist_;
};

DraftSource identity_source(std::shared_ptr<const SequenceModel> model,
                            const std::string& name) {
  return DraftSource{name, std::move(model), make_transform(TransformKind::kIdentity)};
}

double pooled_tau(const std::vector<RunRecords>& runs) {
  return block_efficiency(runs);
}

// --- Criterion 1: the speedup formula hits its reference operating point ---
Outcome check_speedup_spot_value() {
  const double v = expected_speedup(2.29, 5, LatencyModel::from_ratio(0.063));
  const bool pass = std::abs(v - 1.74) <= 0.005;
  return {pass, format("expected_speedup(2.29, 5, 0.063) = %.4f", v)};
}

// --- Criterion 2: latency-ratio presets carry their exact table values ---
Outcome check_latency_presets() {
  struct Row {
    const char* target;
    const char* draft;
    double ratio;
  };
  const Row rows[] = {{"7B", "68M", 0.063},
                      {"7B", "160M", 0.206},
                      {"13B", "68M", 0.042},
                      {"13B", "160M", 0.137}};
  for (const auto& row : rows) {
    if (LatencyModel::preset(row.target, row.draft).ratio != row.ratio) {
      return {false, format("preset (%s,%s) != %.3f", row.target, row.draft, row.ratio)};
    }
  }
  return {true, "4/4 presets exact"};
}

// --- Criterion 3: one stochastic verification step has output law p ---
Outcome check_step_law() {
  Rng rng(1003);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    auto p = random_distribution(rng, 16, 0.25);
    auto q = random_distribution(rng, 16, 0.25);
    auto law = oracle::exact_step_law(p, q);
    for (int t = 0; t < 16; ++t) {
      worst = std::max(worst, std::abs(law[t] - p[t]));
    }
  }
  return {worst < 1e-12, format("max |law - p| = %.3g over 1000 pairs", worst)};
}

// --- Criterion 4: every greedy pipeline reproduces reference decoding ---
Outcome check_exhaustive_greedy() {
  Rng setup(1004);
  auto target = std::make_shared<KgramModel>(
      train_kgram(random_corpus(setup, 4, 5, 40), 1, 0.1, 4));
  auto near = std::make_shared<KgramModel>(
      train_kgram(random_corpus(setup, 4, 5, 40), 1, 0.1, 4));
  auto far = std::make_shared<SyntheticOracle>(404, 0.1, 4);
  std::vector<DraftSource> sources{identity_source(near, "near"),
                                   identity_source(far, "far")};
  auto result = oracle::exhaustive_greedy_check(*target, sources, 3, 8);
  if (!result.pass) return {false, result.counterexample};
  return {true, "all pipelines match reference greedy decoding (vocab 4, depth 3)"};
}

// --- Criterion 5: acceptance rate equals 1 - tvd(p, q) ---
Outcome check_acceptance_rate() {
  Rng pair_rng(1005);
  const int n = 100000;
  double worst_sigma = 0.0;
  for (int pair = 0; pair < 20; ++pair) {
    auto p = random_distribution(pair_rng, 10, 0.15);
    auto q = random_distribution(pair_rng, 10, 0.15);
    ConstModel target(p);
    auto src = identity_source(std::make_shared<ConstModel>(q), "q");
    auto ctx = text_prompt({0});

    Rng rng(mix64(2000 + static_cast<std::uint64_t>(pair)));
    long accepted = 0;
    for (int i = 0; i < n; ++i) {
      auto block = draft_block(src, ctx, 1, DecodeMode::kStochastic, rng);
      auto vr = verify_stochastic(target, ctx, block, rng);
      accepted += vr.accepted_count;
    }
    const double expected = 1.0 - tvd(p, q);
    const double got = static_cast<double>(accepted) / n;
    const double se = std::sqrt(std::max(expected * (1.0 - expected), 1e-12) / n);
    const double sigmas = std::abs(got - expected) / se;
    worst_sigma = std::max(worst_sigma, sigmas);
    if (sigmas > 4.0) {
      return {false, format("pair %d: rate %.5f vs 1-tvd %.5f (%.1f sigma)", pair, got,
                            expected, sigmas)};
    }
  }
  return {true, format("20/20 pairs within 4 binomial SE (worst %.2f)", worst_sigma)};
}

// --- Criterion 6: stochastic sessions preserve per-position marginals ---
Outcome check_session_equivalence() {
  Rng setup(1006);
  const int vocab = 8;
  auto target = std::make_shared<KgramModel>(
      train_kgram(random_corpus(setup, vocab, 6, 60), 1, 0.1, vocab));
  auto drafter = std::make_shared<KgramModel>(
      train_kgram(random_corpus(setup, vocab, 6, 60), 1, 0.1, vocab));
  auto src = identity_source(drafter, "q");
  auto prompt = text_prompt({1, 5});

  const int n = 100000;
  const int positions = 3;
  std::vector<std::vector<TokenId>> sd(positions), ar(positions);
  for (auto& v : sd) v.reserve(n);
  for (auto& v : ar) v.reserve(n);

  DecodeConfig cfg;
  cfg.gamma = 3;
  cfg.mode = DecodeMode::kStochastic;
  cfg.max_new_tokens = positions;
  for (int i = 0; i < n; ++i) {
    cfg.seed = hash_combine(0x5d5d, static_cast<std::uint64_t>(i));
    auto out = decode_session(*target, src, prompt, cfg);
    for (int pos = 0; pos < positions; ++pos) {
      sd[pos].push_back(out.tokens[static_cast<std::size_t>(pos)]);
    }
  }
  for (int i = 0; i < n; ++i) {
    Rng rng(hash_combine(0xa5a5, static_cast<std::uint64_t>(i)));
    Context run = prompt;
    for (int pos = 0; pos < positions; ++pos) {
      TokenId y = sample(target->next_distribution(run), rng);
      ar[pos].push_back(y);
      run.append(y);
    }
  }

  double worst = 0.0;
  for (int pos = 0; pos < positions; ++pos) {
    std::size_t ia = 0, ib = 0;
    auto next_sd = [&]() { return sd[pos][ia++]; };
    auto next_ar = [&]() { return ar[pos][ib++]; };
    auto mc = oracle::mc_equivalence(next_sd, next_ar, n, 0.02);
    worst = std::max(worst, mc.tvd_estimate);
    if (!mc.pass) {
      return {false, format("position %d marginal TVD %.4f >= 0.02", pos, mc.tvd_estimate)};
    }
  }
  return {true, format("3 positions, worst marginal TVD %.4f", worst)};
}

// --- Criterion 7: the adaptive ensemble dominates across both scenarios ---
Outcome check_ensemble_dominance() {
  auto run = [&](const std::string& name) {
    return run_experiment(load_experiment_config(fixture_dir() / name));
  };
  struct Scenario {
    std::string name;
    double tabed;
    double single_a;
    double single_b;
  };
  std::vector<Scenario> rows;
  for (const std::string scenario : {"in_dist", "ood"}) {
    Scenario row;
    row.name = scenario;
    row.tabed = run(scenario + "_tabed_grid.json").block_efficiency;
    row.single_a = run(scenario + "_single_a.json").block_efficiency;
    row.single_b = run(scenario + "_single_b.json").block_efficiency;
    rows.push_back(row);
  }

  std::ostringstream detail;
  bool a_fails_somewhere = false;
  bool b_fails_somewhere = false;
  for (const auto& row : rows) {
    const double best = std::max(row.single_a, row.single_b);
    detail << format("%s: tabed %.3f a %.3f b %.3f; ", row.name.c_str(), row.tabed,
                     row.single_a, row.single_b);
    if (row.tabed < 0.95 * best) {
      return {false, detail.str() + "ensemble below 0.95 x best single"};
    }
    if (row.single_a < 0.8 * best) a_fails_somewhere = true;
    if (row.single_b < 0.8 * best) b_fails_somewhere = true;
  }
  if (!a_fails_somewhere || !b_fails_somewhere) {
    return {false, detail.str() + "a single source never drops below 0.8 x best"};
  }
  return {true, detail.str() + "ensemble robust, singles brittle"};
}

// --- Criterion 8: block efficiency is monotone in tree width ---
Outcome check_tree_monotonicity() {
  auto cfg = load_experiment_config(fixture_dir() / "in_dist_tabed_grid.json");
  auto target = build_model(cfg.target, cfg.vocab_size, cfg.base_dir);
  std::vector<DraftSource> sources;
  for (const auto& spec : cfg.sources) {
    sources.push_back(DraftSource{spec.name,
                                  build_model(spec.model, cfg.vocab_size, cfg.base_dir),
                                  make_transform(spec.transform, spec.transform_params)});
  }
  auto prompts = build_prompts(cfg.prompts, cfg.vocab_size, cfg.seed, cfg.base_dir);

  DecodeConfig dc = cfg.decode;
  std::ostringstream detail;

  struct Variant {
    std::string name;
    std::function<DecodeResult(const Context&, const TreeSessionOptions*)> run;
  };
  std::vector<DraftSource> only_a{sources[0]};
  TabedOptions tabed_opts;  // grid(10), soft_kl, full window

  std::vector<Variant> variants;
  variants.push_back(
      {"single", [&](const Context& ctx, const TreeSessionOptions* topts) {
         if (topts == nullptr) return decode_session(*target, only_a[0], ctx, dc);
         return tree_session(*target, only_a, ctx, dc, *topts);
       }});
  variants.push_back(
      {"tabed", [&](const Context& ctx, const TreeSessionOptions* topts) {
         if (topts == nullptr) return tabed_session(*target, sources, ctx, dc, tabed_opts);
         TreeSessionOptions with_ensemble = *topts;
         with_ensemble.tabed = tabed_opts;
         return tree_session(*target, sources, ctx, dc, with_ensemble);
       }});

  for (const auto& variant : variants) {
    std::vector<RunRecords> linear_runs;
    std::vector<std::vector<TokenId>> linear_tokens;
    for (const auto& prompt : prompts) {
      auto out = variant.run(prompt, nullptr);
      linear_runs.push_back(out.records);
      linear_tokens.push_back(out.tokens);
    }
    const double linear_tau = pooled_tau(linear_runs);

    double prev = -1.0;
    for (int width = 1; width <= 3; ++width) {
      TreeSessionOptions topts;
      topts.width = width;
      std::vector<RunRecords> runs;
      std::vector<std::vector<TokenId>> tokens;
      for (const auto& prompt : prompts) {
        auto out = variant.run(prompt, &topts);
        runs.push_back(out.records);
        tokens.push_back(out.tokens);
      }
      const double tau = pooled_tau(runs);
      detail << format("%s d=%d: %.3f; ", variant.name.c_str(), width, tau);
      if (width == 1) {
        if (tau != linear_tau || tokens != linear_tokens) {
          return {false, detail.str() +
                             format("width-1 differs from linear (%.6f vs %.6f)", tau,
                                    linear_tau)};
        }
      }
      if (tau + 1e-12 < prev) {
        return {false, detail.str() + "efficiency decreased with width"};
      }
      prev = tau;
    }
  }
  return {true, detail.str() + "monotone, width 1 == linear"};
}

// --- Criterion 9: the history window barely moves the fixture result ---
Outcome check_window_ablation() {
  auto base = load_experiment_config(fixture_dir() / "ood_tabed_grid.json");
  std::ostringstream detail;
  double lo = 1e300, hi = 0.0;
  for (std::size_t window : {std::size_t{1}, std::size_t{4}, std::size_t{16}, kWindowAll}) {
    auto cfg = base;
    cfg.drafting.window = window;
    const double tau = run_experiment(cfg).block_efficiency;
    if (window == kWindowAll) {
      detail << format("h=all: %.3f; ", tau);
    } else {
      detail << format("h=%zu: %.3f; ", window, tau);
    }
    lo = std::min(lo, tau);
    hi = std::max(hi, tau);
  }
  const double spread = hi / lo;
  const bool pass = spread <= 1.10;
  detail << format("spread %.3fx", spread);
  return {pass, detail.str()};
}

// --- Criterion 10: identical config and seed give byte-identical output ---
Outcome check_determinism() {
  auto cfg = load_experiment_config(fixture_dir() / "in_dist_tabed_grid.json");
  auto first = run_experiment(cfg);
  auto second = run_experiment(cfg);
  auto json_a = summary_to_json(first);
  auto json_b = summary_to_json(second);
  if (json_a != json_b) return {false, "in-process summaries differ"};

  auto tmp = std::filesystem::temp_directory_path() /
             ("specdec_accept_" + std::to_string(::getpid()));
  std::filesystem::remove_all(tmp);
  write_run_outputs(first, cfg, tmp / "a");
  write_run_outputs(second, cfg, tmp / "b");
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
  const bool same_summary =
      slurp(tmp / "a" / "summary.json") == slurp(tmp / "b" / "summary.json");
  const bool same_csv =
      slurp(tmp / "a" / "weights.csv") == slurp(tmp / "b" / "weights.csv");
  std::filesystem::remove_all(tmp);
  if (!same_summary || !same_csv) return {false, "files on disk differ between runs"};
  return {true, format("%zu summary bytes identical across runs", json_a.size())};
}

struct Criterion {
  std::string name;
  std::function<Outcome()> check;
  double time_limit_s;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"expected-speedup spot value", check_speedup_spot_value, 0.001},
      {"latency-ratio presets", check_latency_presets, 1.0},
      {"stochastic step law equals target", check_step_law, 5.0},
      {"exhaustive greedy losslessness", check_exhaustive_greedy, 60.0},
      {"acceptance-rate identity", check_acceptance_rate, 30.0},
      {"session marginal equivalence", check_session_equivalence, 120.0},
      {"adaptive-ensemble dominance", check_ensemble_dominance, 120.0},
      {"tree-width monotonicity", check_tree_monotonicity, 120.0},
      {"window ablation stability", check_window_ablation, 180.0},
      {"run determinism", check_determinism, 120.0},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    Outcome outcome;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      outcome = criterion.check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (elapsed > criterion.time_limit_s) {
      outcome.pass = false;
      outcome.detail += format(" [exceeded %.0fs budget]", criterion.time_limit_s);
    }
    std::printf("%s — %s (%s; %.2fs)\n", outcome.pass ? "PASS" : "FAIL",
                criterion.name.c_str(), outcome.detail.c_str(), elapsed);
    if (!outcome.pass) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
