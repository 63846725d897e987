// Microbenchmarks for the hot paths: distribution arithmetic, model
// evaluation, and the three decoding loops.

#include <benchmark/benchmark.h>

#include <memory>
#include <vector>

#include "specdec/dist.hpp"
#include "specdec/model.hpp"
#include "specdec/rng.hpp"
#include "specdec/session.hpp"
#include "specdec/tabed.hpp"
#include "specdec/tree.hpp"

using namespace specdec;

namespace {

Distribution random_dist(Rng& rng, int vocab) {
  std::vector<double> w(static_cast<std::size_t>(vocab));
  double total = 0.0;
  for (auto& v : w) {
    v = rng.next_unit() + 1e-9;
    total += v;
  }
  for (auto& v : w) v /= total;
  return Distribution(std::move(w));
}

std::vector<std::vector<TokenId>> random_corpus(Rng& rng, int vocab, int docs,
                                                int doc_len) {
  std::vector<std::vector<TokenId>> corpus(static_cast<std::size_t>(docs));
  for (auto& doc : corpus) {
    for (int i = 0; i < doc_len; ++i) {
      doc.push_back(static_cast<TokenId>(rng.next_u64() % vocab));
    }
  }
  return corpus;
}

DraftSource identity_source(std::shared_ptr<const SequenceModel> model,
                            const std::string& name) {
  return DraftSource{name, std::move(model), make_transform(TransformKind::kIdentity)};
}

void bm_weighted_average(benchmark::State& state) {
  const int vocab = static_cast<int>(state.range(0));
  Rng rng(1);
  std::vector<Distribution> dists{random_dist(rng, vocab), random_dist(rng, vocab)};
  auto w = WeightVector({0.3, 0.7});
  for (auto _ : state) {
    benchmark::DoNotOptimize(weighted_average(dists, w));
  }
}
BENCHMARK(bm_weighted_average)->Arg(128)->Arg(1024);

void bm_kl_divergence(benchmark::State& state) {
  const int vocab = static_cast<int>(state.range(0));
  Rng rng(2);
  auto p = random_dist(rng, vocab);
  auto q = random_dist(rng, vocab);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kl_divergence(p, q));
  }
}
BENCHMARK(bm_kl_divergence)->Arg(128)->Arg(1024);

void bm_sample(benchmark::State& state) {
  Rng rng(3);
  auto d = random_dist(rng, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample(d, rng));
  }
}
BENCHMARK(bm_sample)->Arg(128)->Arg(1024);

void bm_kgram_eval(benchmark::State& state) {
  Rng rng(4);
  auto model = train_kgram(random_corpus(rng, 128, 16, 400), 2, 0.05, 128);
  auto ctx = text_prompt({10, 20, 30});
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.next_distribution(ctx));
  }
}
BENCHMARK(bm_kgram_eval);

void bm_decode_session(benchmark::State& state) {
  Rng rng(5);
  auto target = std::make_shared<KgramModel>(
      train_kgram(random_corpus(rng, 64, 8, 200), 2, 0.05, 64));
  auto drafter = std::make_shared<KgramModel>(
      train_kgram(random_corpus(rng, 64, 8, 200), 2, 0.05, 64));
  auto src = identity_source(drafter, "q");
  DecodeConfig cfg;
  cfg.gamma = 5;
  cfg.mode = DecodeMode::kGreedy;
  cfg.max_new_tokens = 64;
  std::size_t tokens = 0;
  for (auto _ : state) {
    auto out = decode_session(*target, src, text_prompt({1, 2}), cfg);
    tokens += out.tokens.size();
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(tokens));
}
BENCHMARK(bm_decode_session);

void bm_tabed_session(benchmark::State& state) {
  Rng rng(6);
  auto target = std::make_shared<KgramModel>(
      train_kgram(random_corpus(rng, 64, 8, 200), 2, 0.05, 64));
  auto other = std::make_shared<KgramModel>(
      train_kgram(random_corpus(rng, 64, 8, 200), 2, 0.05, 64));
  std::vector<DraftSource> sources{identity_source(target, "a"),
                                   identity_source(other, "b")};
  DecodeConfig cfg;
  cfg.gamma = 5;
  cfg.mode = DecodeMode::kGreedy;
  cfg.max_new_tokens = 64;
  TabedOptions opts;
  std::size_t tokens = 0;
  for (auto _ : state) {
    auto out = tabed_session(*target, sources, text_prompt({1, 2}), cfg, opts);
    tokens += out.tokens.size();
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(tokens));
}
BENCHMARK(bm_tabed_session);

void bm_tree_session(benchmark::State& state) {
  Rng rng(7);
  auto target = std::make_shared<KgramModel>(
      train_kgram(random_corpus(rng, 64, 8, 200), 2, 0.05, 64));
  auto drafter = std::make_shared<KgramModel>(
      train_kgram(random_corpus(rng, 64, 8, 200), 2, 0.05, 64));
  std::vector<DraftSource> sources{identity_source(drafter, "q")};
  DecodeConfig cfg;
  cfg.gamma = 5;
  cfg.mode = DecodeMode::kGreedy;
  cfg.max_new_tokens = 64;
  TreeSessionOptions opts;
  opts.width = static_cast<int>(state.range(0));
  std::size_t tokens = 0;
  for (auto _ : state) {
    auto out = tree_session(*target, sources, text_prompt({1, 2}), cfg, opts);
    tokens += out.tokens.size();
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(tokens));
}
BENCHMARK(bm_tree_session)->Arg(1)->Arg(2)->Arg(3);

}  // namespace

BENCHMARK_MAIN();
