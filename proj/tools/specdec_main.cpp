// Command-line front end: train toy models, run configured experiments,
// aggregate summaries into comparison tables, and self-check the engine
// against its independent oracles.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "specdec/errors.hpp"
#include "specdec/experiment.hpp"
#include "specdec/oracle.hpp"
#include "specdec/session.hpp"
#include "specdec/verify.hpp"

namespace fs = std::filesystem;
using namespace specdec;

namespace {

struct TrainConfig {
  fs::path corpus;
  int k = 2;
  double lambda = 0.05;
  int vocab_size = 128;
  fs::path snapshot;
};

TrainConfig load_train_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
    TrainConfig cfg;
    cfg.corpus = j.at("corpus").get<std::string>();
    cfg.k = j.value("k", cfg.k);
    cfg.lambda = j.value("lambda", cfg.lambda);
    cfg.vocab_size = j.value("vocab_size", cfg.vocab_size);
    cfg.snapshot = j.value("snapshot", std::string("model.json"));
    if (cfg.k < 0) throw ConfigError("train config: k must be >= 0");
    if (!(cfg.lambda > 0.0)) throw ConfigError("train config: lambda must be > 0");
    if (cfg.vocab_size < 1) throw ConfigError("train config: vocab_size must be >= 1");
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("train config " + path.string() + ": " + e.what());
  }
}

fs::path resolve(const fs::path& base, const fs::path& p) {
  return p.is_absolute() ? p : base / p;
}

int cmd_train(const fs::path& config_path, const std::optional<fs::path>& out_dir) {
  const auto cfg = load_train_config(config_path);
  const fs::path base = config_path.parent_path();
  const auto corpus = load_corpus(resolve(base, cfg.corpus));
  const auto model = train_kgram(corpus, cfg.k, cfg.lambda, cfg.vocab_size);

  fs::path snapshot = cfg.snapshot;
  if (out_dir) {
    fs::create_directories(*out_dir);
    snapshot = *out_dir / snapshot.filename();
  } else {
    snapshot = resolve(base, snapshot);
  }
  model.save(snapshot);

  std::size_t tokens = 0;
  for (const auto& doc : corpus) tokens += doc.size();
  std::printf("trained k=%d lambda=%g on %zu docs (%zu tokens) -> %s\n", cfg.k,
              cfg.lambda, corpus.size(), tokens, snapshot.string().c_str());
  return 0;
}

int cmd_run(const fs::path& config_path, const std::optional<std::uint64_t>& seed,
            const std::optional<fs::path>& out_dir) {
  auto cfg = load_experiment_config(config_path);
  if (seed) cfg.seed = *seed;
  const auto report = run_experiment(cfg);

  const fs::path out = out_dir.value_or(fs::current_path() / "out" / report.method);
  write_run_outputs(report, cfg, out);
  std::printf("%s/%s: block efficiency %.4f, modeled speedup %.4f (gamma %d, %s",
              report.scenario.c_str(), report.method.c_str(), report.block_efficiency,
              report.modeled_speedup, report.gamma, report.verification.c_str());
  if (report.verification == "tree") std::printf(" d=%d", report.tree_width);
  std::printf(")\n  wrote %s and %s\n", (out / cfg.summary_filename).string().c_str(),
              (out / cfg.weights_filename).string().c_str());
  return 0;
}

int cmd_report(const std::vector<fs::path>& summary_paths, const std::string& fmt,
               const std::optional<fs::path>& out_path) {
  std::vector<RunReport> reports;
  for (const auto& path : summary_paths) reports.push_back(load_summary(path));
  const auto table = compare_report(reports);

  std::string rendered;
  if (fmt == "json") {
    rendered = comparison_to_json(table);
  } else if (fmt == "csv") {
    rendered = comparison_to_csv(table);
  } else {
    rendered = comparison_to_text(table);
  }

  if (out_path) {
    if (out_path->has_parent_path()) fs::create_directories(out_path->parent_path());
    std::ofstream out(*out_path, std::ios::binary);
    if (!out) throw IoError("cannot open " + out_path->string());
    out << rendered;
    std::printf("wrote %s\n", out_path->string().c_str());
  } else {
    std::fputs(rendered.c_str(), stdout);
  }
  return 0;
}

int cmd_selftest(std::uint64_t seed) {
  int failures = 0;
  const auto report = [&](bool pass, const std::string& name, const std::string& detail) {
    std::printf("%s — %s (%s)\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    if (!pass) ++failures;
  };

  {
    Rng rng(seed);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> pw(12), qw(12);
      double pt = 0.0, qt = 0.0;
      for (int i = 0; i < 12; ++i) {
        pw[i] = rng.next_unit() + 1e-9;
        qw[i] = (rng.next_unit() < 0.25) ? 0.0 : rng.next_unit() + 1e-9;
        pt += pw[i];
        qt += qw[i];
      }
      if (qt <= 0.0) {
        qw[0] = 1.0;
        qt = 1.0;
      }
      for (int i = 0; i < 12; ++i) {
        pw[i] /= pt;
        qw[i] /= qt;
      }
      Distribution p(pw), q(qw);
      auto law = oracle::exact_step_law(p, q);
      for (int t = 0; t < 12; ++t) worst = std::max(worst, std::abs(law[t] - p[t]));
    }
    report(worst < 1e-12, "one-step output law equals the target",
           "max error " + std::to_string(worst));
  }

  {
    // The engine's single-step acceptance rate against its closed form.
    Rng rng(seed + 1);
    std::vector<double> pw{0.35, 0.25, 0.2, 0.2}, qw{0.1, 0.4, 0.3, 0.2};
    Distribution p(pw), q(qw);
    class Const : public SequenceModel {
     public:
      explicit Const(Distribution d) : d_(std::move(d)) {}
      int vocab_size() const override { return d_.vocab_size(); }
      Distribution next_distribution(const Context&) const override { return d_; }

     private:
      Distribution d_;
    } target(p);
    DraftSource src{"q", std::make_shared<Const>(q),
                    make_transform(TransformKind::kIdentity)};
    auto ctx = text_prompt({0});
    const int n = 50000;
    long accepted = 0;
    for (int i = 0; i < n; ++i) {
      auto block = draft_block(src, ctx, 1, DecodeMode::kStochastic, rng);
      accepted += verify_stochastic(target, ctx, block, rng).accepted_count;
    }
    const double got = static_cast<double>(accepted) / n;
    const double expect = 1.0 - tvd(p, q);
    const double se = std::sqrt(expect * (1.0 - expect) / n);
    report(std::abs(got - expect) <= 5.0 * se, "acceptance rate equals 1 - TVD",
           "rate " + std::to_string(got) + " vs " + std::to_string(expect));
  }

  {
    Rng a(seed + 2), b(seed + 3);
    Distribution d({0.5, 0.3, 0.2});
    auto mc = oracle::mc_equivalence([&] { return sample(d, a); },
                                     [&] { return sample(d, b); }, 50000);
    report(mc.pass, "independent streams agree in distribution",
           "TVD " + std::to_string(mc.tvd_estimate));
  }

  {
    Rng setup(seed + 4);
    auto corpus = [&](int docs) {
      std::vector<std::vector<TokenId>> out;
      for (int d = 0; d < docs; ++d) {
        std::vector<TokenId> doc;
        for (int i = 0; i < 30; ++i) {
          doc.push_back(static_cast<TokenId>(setup.next_u64() % 3));
        }
        out.push_back(std::move(doc));
      }
      return out;
    };
    auto target = std::make_shared<KgramModel>(train_kgram(corpus(4), 1, 0.1, 3));
    std::vector<DraftSource> sources{
        DraftSource{"near", std::make_shared<KgramModel>(train_kgram(corpus(4), 1, 0.1, 3)),
                    make_transform(TransformKind::kIdentity)},
        DraftSource{"far", std::make_shared<SyntheticOracle>(seed + 5, 0.1, 3),
                    make_transform(TransformKind::kIdentity)}};
    auto result = oracle::exhaustive_greedy_check(*target, sources, 2, 6);
    report(result.pass, "greedy pipelines reproduce reference decoding",
           result.pass ? "all pipelines exact" : result.counterexample);

    // Negative control: a deliberately broken pipeline must be caught.
    std::vector<Context> prompts{text_prompt({0}), text_prompt({1, 2})};
    DecodeConfig cfg;
    cfg.gamma = 2;
    cfg.mode = DecodeMode::kGreedy;
    cfg.max_new_tokens = 6;
    auto broken = [&](const Context& prompt) {
      auto tokens = decode_session(*target, sources[0], prompt, cfg).tokens;
      if (!tokens.empty()) tokens.back() = (tokens.back() + 1) % 3;
      return tokens;
    };
    auto caught =
        oracle::check_pipeline_greedy(*target, prompts, 6, std::nullopt, broken, "broken");
    report(!caught.pass && !caught.counterexample.empty(),
           "checker flags a corrupted pipeline",
           caught.pass ? "corruption went unnoticed" : "counterexample produced");
  }

  std::printf("%s\n", failures == 0 ? "selftest passed" : "selftest FAILED");
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"speculative decoding experiment harness"};
  app.require_subcommand(1);

  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::string format = "text";
  std::vector<std::string> summaries;
  std::uint64_t selftest_seed = 0;

  auto* train = app.add_subcommand("train", "train a k-gram model snapshot");
  train->add_option("--config", config, "training config JSON")->required();
  train->add_option("--out", out, "directory for the snapshot");

  auto* run = app.add_subcommand("run", "run one configured experiment");
  run->add_option("--config", config, "experiment config JSON")->required();
  run->add_option("--seed", seed, "override the config seed");
  run->add_option("--out", out, "output directory");

  auto* rep = app.add_subcommand("report", "compare run summaries");
  rep->add_option("summaries", summaries, "summary.json files")->required();
  rep->add_option("--format", format, "output format")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  rep->add_option("--out", out, "write the table here instead of stdout");

  auto* self = app.add_subcommand("selftest", "run the built-in oracle checks");
  self->add_option("--seed", selftest_seed, "seed for the randomized checks");

  CLI11_PARSE(app, argc, argv);

  try {
    const std::optional<fs::path> out_path =
        out ? std::optional<fs::path>(*out) : std::nullopt;
    if (train->parsed()) return cmd_train(config, out_path);
    if (run->parsed()) return cmd_run(config, seed, out_path);
    if (rep->parsed()) {
      std::vector<fs::path> paths(summaries.begin(), summaries.end());
      return cmd_report(paths, format, out_path);
    }
    if (self->parsed()) return cmd_selftest(selftest_seed);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
