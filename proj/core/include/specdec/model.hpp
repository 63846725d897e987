#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "specdec/context.hpp"
#include "specdec/dist.hpp"

namespace specdec {

// A next-token distribution provider. Implementations must be deterministic:
// the same context always yields the same distribution.
class SequenceModel {
 public:
  virtual ~SequenceModel() = default;
  virtual int vocab_size() const = 0;
  virtual Distribution next_distribution(const Context& ctx) const = 0;
};

// Order-k count model with add-lambda smoothing:
//   p(y | c) = (count(c, y) + lambda) / (total(c) + lambda * vocab_size)
// where c is the last k flattened context tokens. Contexts never seen in
// training (including contexts shorter than k) fall back to the pure
// smoothing prior, which is uniform.
class KgramModel : public SequenceModel {
 public:
  KgramModel(int k, double lambda, int vocab_size);

  int vocab_size() const override { return vocab_; }
  Distribution next_distribution(const Context& ctx) const override;

  int order() const { return k_; }
  double smoothing() const { return lambda_; }

  // Snapshot round-trip: {k, lambda, vocab_size, counts} with counts as
  // [[context tokens], [per-token counts]] pairs in sorted context order.
  std::string to_json() const;
  static KgramModel from_json(const std::string& text);
  void save(const std::filesystem::path& path) const;
  static KgramModel load(const std::filesystem::path& path);

 private:
  friend KgramModel train_kgram(const std::vector<std::vector<TokenId>>& corpus,
                                int k, double lambda, int vocab_size);

  int k_;
  double lambda_;
  int vocab_;
  std::map<std::vector<TokenId>, std::vector<std::uint64_t>> counts_;
};

// Count every length-(k+1) window of every corpus document.
KgramModel train_kgram(const std::vector<std::vector<TokenId>>& corpus, int k,
                       double lambda, int vocab_size);

// Deterministic random model: each distinct context gets an independent
// Dirichlet(concentration) draw, derived from (seed, context hash) and
// memoized so repeated queries are bit-identical. Low concentration gives
// spiky, adversarial distributions; high concentration near-uniform ones.
class SyntheticOracle : public SequenceModel {
 public:
  SyntheticOracle(std::uint64_t seed, double concentration, int vocab_size);

  int vocab_size() const override { return vocab_; }
  Distribution next_distribution(const Context& ctx) const override;

 private:
  std::uint64_t seed_;
  double concentration_;
  int vocab_;
  mutable std::mutex mu_;
  mutable std::unordered_map<std::uint64_t, Distribution> memo_;
};

// Corpus files are UTF-8 text, one document per line, tokenized at byte
// level (so any vocab_size up to 256 works for ASCII corpora).
std::vector<std::vector<TokenId>> load_corpus(const std::filesystem::path& path);

}  // namespace specdec
