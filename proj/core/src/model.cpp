#include "specdec/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "specdec/errors.hpp"
#include "specdec/rng.hpp"

namespace specdec {
namespace {

void check_params(int k, double lambda, int vocab_size, const char* what) {
  if (k < 0) throw BadParams(std::string(what) + ": k < 0");
  if (!(lambda > 0.0)) throw BadParams(std::string(what) + ": lambda must be > 0");
  if (vocab_size < 1) throw BadParams(std::string(what) + ": vocab_size < 1");
}

// Deterministic digest of a context: segment tags, boundaries and generated
// tokens all feed the hash, so any visible difference between two contexts
// yields a different draw (up to hash collisions, which at desk scale are
// not a concern).
std::uint64_t context_digest(std::uint64_t seed, const Context& ctx) {
  std::uint64_t h = mix64(seed ^ 0xa0761d6478bd642full);
  for (const Segment& s : ctx.segments) {
    h = hash_combine(h, 0xff00 + static_cast<std::uint64_t>(s.tag));
    for (TokenId t : s.tokens) {
      h = hash_combine(h, static_cast<std::uint64_t>(t));
    }
  }
  h = hash_combine(h, 0xfeed);
  for (TokenId t : ctx.generated) {
    h = hash_combine(h, static_cast<std::uint64_t>(t));
  }
  return h;
}

// Marsaglia-Tsang gamma variate; deterministic given the rng stream.
double sample_gamma(double alpha, Rng& rng) {
  if (alpha < 1.0) {
    const double u = std::max(rng.next_unit(), 1e-300);
    return sample_gamma(alpha + 1.0, rng) * std::pow(u, 1.0 / alpha);
  }
  const double d = alpha - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.next_normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = std::max(rng.next_unit(), 1e-300);
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace

KgramModel::KgramModel(int k, double lambda, int vocab_size)
    : k_(k), lambda_(lambda), vocab_(vocab_size) {
  check_params(k, lambda, vocab_size, "KgramModel");
}

Distribution KgramModel::next_distribution(const Context& ctx) const {
  const std::vector<TokenId> flat = ctx.flatten();
  std::vector<double> probs(static_cast<std::size_t>(vocab_), 0.0);
  const std::vector<std::uint64_t>* counts = nullptr;
  if (static_cast<int>(flat.size()) >= k_) {
    std::vector<TokenId> key(flat.end() - k_, flat.end());
    auto it = counts_.find(key);
    if (it != counts_.end()) counts = &it->second;
  }
  double total = 0.0;
  if (counts != nullptr) {
    for (std::uint64_t c : *counts) total += static_cast<double>(c);
  }
  const double denom = total + lambda_ * vocab_;
  for (int y = 0; y < vocab_; ++y) {
    const double c =
        counts != nullptr ? static_cast<double>((*counts)[static_cast<std::size_t>(y)]) : 0.0;
    probs[static_cast<std::size_t>(y)] = (c + lambda_) / denom;
  }
  return Distribution(std::move(probs));
}

std::string KgramModel::to_json() const {
  nlohmann::ordered_json j;
  j["k"] = k_;
  j["lambda"] = lambda_;
  j["vocab_size"] = vocab_;
  auto& rows = j["counts"] = nlohmann::ordered_json::array();
  for (const auto& [key, counts] : counts_) {
    rows.push_back({key, counts});
  }
  return j.dump(2);
}

KgramModel KgramModel::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("KgramModel::from_json: ") + e.what());
  }
  try {
    KgramModel model(j.at("k").get<int>(), j.at("lambda").get<double>(),
                     j.at("vocab_size").get<int>());
    for (const auto& row : j.at("counts")) {
      auto key = row.at(0).get<std::vector<TokenId>>();
      auto counts = row.at(1).get<std::vector<std::uint64_t>>();
      if (static_cast<int>(key.size()) != model.k_ ||
          static_cast<int>(counts.size()) != model.vocab_) {
        throw ConfigError("KgramModel::from_json: count row shape mismatch");
      }
      model.counts_.emplace(std::move(key), std::move(counts));
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("KgramModel::from_json: ") + e.what());
  }
}

void KgramModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("KgramModel::save: cannot open " + path.string());
  out << to_json() << '\n';
  if (!out) throw IoError("KgramModel::save: write failed for " + path.string());
}

KgramModel KgramModel::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("KgramModel::load: cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

KgramModel train_kgram(const std::vector<std::vector<TokenId>>& corpus, int k,
                       double lambda, int vocab_size) {
  check_params(k, lambda, vocab_size, "train_kgram");
  KgramModel model(k, lambda, vocab_size);
  for (const auto& doc : corpus) {
    for (TokenId t : doc) {
      if (t < 0 || t >= vocab_size) {
        throw TokenOutOfVocab("train_kgram: token " + std::to_string(t) +
                              " outside vocab of size " + std::to_string(vocab_size));
      }
    }
    if (static_cast<int>(doc.size()) < k + 1) continue;
    for (std::size_t i = 0; i + static_cast<std::size_t>(k) < doc.size(); ++i) {
      std::vector<TokenId> key(doc.begin() + static_cast<std::ptrdiff_t>(i),
                               doc.begin() + static_cast<std::ptrdiff_t>(i) + k);
      auto [it, inserted] = model.counts_.try_emplace(
          std::move(key), std::vector<std::uint64_t>(static_cast<std::size_t>(vocab_size), 0));
      ++it->second[static_cast<std::size_t>(doc[i + static_cast<std::size_t>(k)])];
    }
  }
  return model;
}

SyntheticOracle::SyntheticOracle(std::uint64_t seed, double concentration,
                                 int vocab_size)
    : seed_(seed), concentration_(concentration), vocab_(vocab_size) {
  if (!(concentration > 0.0)) {
    throw BadParams("SyntheticOracle: concentration must be > 0");
  }
  if (vocab_size < 1) throw BadParams("SyntheticOracle: vocab_size < 1");
}

Distribution SyntheticOracle::next_distribution(const Context& ctx) const {
  const std::uint64_t digest = context_digest(seed_, ctx);
  std::lock_guard<std::mutex> lock(mu_);
  auto it = memo_.find(digest);
  if (it != memo_.end()) return it->second;

  Rng rng(digest);
  std::vector<double> draws(static_cast<std::size_t>(vocab_), 0.0);
  double sum = 0.0;
  for (double& x : draws) {
    x = sample_gamma(concentration_, rng);
    sum += x;
  }
  if (!(sum > 0.0) || !std::isfinite(sum)) {
    // Pathological underflow; fall back to uniform rather than divide by 0.
    return memo_.emplace(digest, Distribution::uniform(vocab_)).first->second;
  }
  for (double& x : draws) x /= sum;
  return memo_.emplace(digest, Distribution(std::move(draws))).first->second;
}

std::vector<std::vector<TokenId>> load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("load_corpus: cannot open " + path.string());
  std::vector<std::vector<TokenId>> docs;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<TokenId> doc;
    doc.reserve(line.size());
    for (unsigned char c : line) doc.push_back(static_cast<TokenId>(c));
    docs.push_back(std::move(doc));
  }
  return docs;
}

}  // namespace specdec
