#pragma once

#include <unistd.h>

#include <filesystem>
#include <string>
#include <vector>

#include "specdec/dist.hpp"
#include "specdec/model.hpp"
#include "specdec/rng.hpp"

namespace testutil {

inline std::filesystem::path fixture_dir() {
  return std::filesystem::path(SPECDEC_FIXTURE_DIR);
}

inline std::filesystem::path fresh_tmp_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() /
             ("specdec_test_" + tag + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// Context-independent model, handy when a test needs exact probabilities.
class ConstModel : public specdec::SequenceModel {
 public:
  explicit ConstModel(specdec::Distribution dist) : dist_(std::move(dist)) {}

  int vocab_size() const override { return dist_.vocab_size(); }

  specdec::Distribution next_distribution(const specdec::Context&) const override {
    return dist_;
  }

 private:
  specdec::Distribution dist_;
};

// Deterministic "next token = (last + 1) mod V" model, argmax fully predictable.
class CycleModel : public specdec::SequenceModel {
 public:
  explicit CycleModel(int vocab) : vocab_(vocab) {}

  int vocab_size() const override { return vocab_; }

  specdec::Distribution next_distribution(const specdec::Context& ctx) const override {
    auto flat = ctx.flatten();
    specdec::TokenId last = flat.empty() ? -1 : flat.back();
    return specdec::Distribution::point_mass((last + 1) % vocab_, vocab_);
  }

 private:
  int vocab_;
};

inline specdec::Distribution random_distribution(specdec::Rng& rng, int vocab,
                                                 double sparsity = 0.0) {
  std::vector<double> w(vocab);
  double total = 0.0;
  for (int i = 0; i < vocab; ++i) {
    double v = rng.next_unit() + 1e-9;
    if (sparsity > 0.0 && rng.next_unit() < sparsity) v = 0.0;
    w[i] = v;
    total += v;
  }
  if (total <= 0.0) {
    w[static_cast<std::size_t>(rng.next_u64() % vocab)] = 1.0;
    total = 1.0;
  }
  for (auto& v : w) v /= total;
  return specdec::Distribution(std::move(w));
}

inline std::vector<std::vector<specdec::TokenId>> random_corpus(
    specdec::Rng& rng, int vocab, int docs, int doc_len) {
  std::vector<std::vector<specdec::TokenId>> corpus;
  for (int d = 0; d < docs; ++d) {
    std::vector<specdec::TokenId> doc;
    for (int i = 0; i < doc_len; ++i) {
      doc.push_back(static_cast<specdec::TokenId>(rng.next_u64() % vocab));
    }
    corpus.push_back(std::move(doc));
  }
  return corpus;
}

}  // namespace testutil
