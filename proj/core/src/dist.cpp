#include "specdec/dist.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace specdec {
namespace {

std::vector<double> checked_simplex(std::vector<double> v, const char* what) {
  if (v.empty()) {
    throw InvalidDistribution(std::string(what) + ": no entries");
  }
  double sum = 0.0;
  for (double x : v) {
    if (!(x >= 0.0)) {  // also catches NaN
      throw InvalidDistribution(std::string(what) + ": negative or NaN entry " +
                                std::to_string(x));
    }
    sum += x;
  }
  const double deviation = std::abs(sum - 1.0);
  if (deviation > kRenormTolerance) {
    throw InvalidDistribution(std::string(what) + ": entries sum to " +
                              std::to_string(sum));
  }
  if (deviation > 0.0) {
    for (double& x : v) x /= sum;
  }
  return v;
}

}  // namespace

Distribution::Distribution(std::vector<double> probs)
    : probs_(checked_simplex(std::move(probs), "Distribution")) {}

Distribution Distribution::uniform(int vocab_size) {
  if (vocab_size < 1) throw InvalidDistribution("uniform: vocab_size < 1");
  return Distribution(std::vector<double>(static_cast<std::size_t>(vocab_size),
                                          1.0 / vocab_size));
}

Distribution Distribution::point_mass(TokenId token, int vocab_size) {
  if (vocab_size < 1) throw InvalidDistribution("point_mass: vocab_size < 1");
  if (token < 0 || token >= vocab_size) {
    throw TokenOutOfVocab("point_mass: token " + std::to_string(token) +
                          " outside vocab of size " + std::to_string(vocab_size));
  }
  std::vector<double> v(static_cast<std::size_t>(vocab_size), 0.0);
  v[static_cast<std::size_t>(token)] = 1.0;
  return Distribution(std::move(v));
}

TokenId Distribution::argmax() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < probs_.size(); ++i) {
    if (probs_[i] > probs_[best]) best = i;
  }
  return static_cast<TokenId>(best);
}

WeightVector::WeightVector(std::vector<double> weights)
    : weights_(checked_simplex(std::move(weights), "WeightVector")) {}

WeightVector WeightVector::uniform(int m) {
  if (m < 1) throw InvalidDistribution("WeightVector::uniform: m < 1");
  return WeightVector(std::vector<double>(static_cast<std::size_t>(m), 1.0 / m));
}

WeightVector WeightVector::one_hot(int index, int m) {
  if (m < 1 || index < 0 || index >= m) {
    throw InvalidDistribution("WeightVector::one_hot: index " +
                              std::to_string(index) + " out of range for m=" +
                              std::to_string(m));
  }
  std::vector<double> v(static_cast<std::size_t>(m), 0.0);
  v[static_cast<std::size_t>(index)] = 1.0;
  return WeightVector(std::move(v));
}

Distribution weighted_average(const std::vector<Distribution>& dists,
                              const WeightVector& w) {
  if (static_cast<int>(dists.size()) != w.m()) {
    throw DimensionMismatch("weighted_average: " + std::to_string(dists.size()) +
                            " distributions vs " + std::to_string(w.m()) +
                            " weights");
  }
  if (dists.empty()) {
    throw DimensionMismatch("weighted_average: no distributions");
  }
  const int vocab = dists.front().vocab_size();
  std::vector<double> out(static_cast<std::size_t>(vocab), 0.0);
  for (int i = 0; i < w.m(); ++i) {
    if (dists[static_cast<std::size_t>(i)].vocab_size() != vocab) {
      throw DimensionMismatch("weighted_average: vocab sizes differ");
    }
    const auto& p = dists[static_cast<std::size_t>(i)].probs();
    const double wi = w[i];
    for (std::size_t y = 0; y < p.size(); ++y) out[y] += wi * p[y];
  }
  return Distribution(std::move(out));
}

double kl_divergence(const Distribution& p, const Distribution& q, double floor) {
  if (p.vocab_size() != q.vocab_size()) {
    throw DimensionMismatch("kl_divergence: vocab " + std::to_string(p.vocab_size()) +
                            " vs " + std::to_string(q.vocab_size()));
  }
  if (!(floor >= 0.0) || floor > 1e-3) {
    throw BadParams("kl_divergence: floor " + std::to_string(floor) +
                    " outside [0, 1e-3]");
  }
  const double u = 1.0 / p.vocab_size();
  double acc = 0.0;
  for (int y = 0; y < p.vocab_size(); ++y) {
    const double py = p[y];
    if (py <= 0.0) continue;
    const double qy = (1.0 - floor) * q[y] + floor * u;
    acc += py * std::log(py / qy);
  }
  return std::max(acc, 0.0);
}

double tvd(const Distribution& p, const Distribution& q) {
  if (p.vocab_size() != q.vocab_size()) {
    throw DimensionMismatch("tvd: vocab " + std::to_string(p.vocab_size()) +
                            " vs " + std::to_string(q.vocab_size()));
  }
  double acc = 0.0;
  for (int y = 0; y < p.vocab_size(); ++y) acc += std::abs(p[y] - q[y]);
  return 0.5 * acc;
}

Distribution residual_distribution(const Distribution& p, const Distribution& q) {
  if (p.vocab_size() != q.vocab_size()) {
    throw DimensionMismatch("residual_distribution: vocab sizes differ");
  }
  std::vector<double> r(static_cast<std::size_t>(p.vocab_size()), 0.0);
  double mass = 0.0;
  for (int y = 0; y < p.vocab_size(); ++y) {
    const double d = p[y] - q[y];
    if (d > 0.0) {
      r[static_cast<std::size_t>(y)] = d;
      mass += d;
    }
  }
  if (mass <= 1e-12) {
    throw NoResidualMass("residual_distribution: residual mass " +
                         std::to_string(mass));
  }
  for (double& x : r) x /= mass;
  return Distribution(std::move(r));
}

TokenId sample(const Distribution& d, Rng& rng) {
  const double u = rng.next_unit();
  double cum = 0.0;
  const int vocab = d.vocab_size();
  for (int y = 0; y < vocab; ++y) {
    cum += d[y];
    if (u < cum) return y;
  }
  // Float round-off can leave cum fractionally below 1; fall back to the
  // last token with positive probability.
  for (int y = vocab - 1; y >= 0; --y) {
    if (d[y] > 0.0) return y;
  }
  return vocab - 1;
}

std::vector<TokenId> top_d(const Distribution& d, int width) {
  if (width < 1 || width > d.vocab_size()) {
    throw WidthOutOfRange("top_d: width " + std::to_string(width) +
                          " outside [1, " + std::to_string(d.vocab_size()) + "]");
  }
  std::vector<TokenId> order(static_cast<std::size_t>(d.vocab_size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](TokenId a, TokenId b) {
    return d[a] > d[b];  // stable keeps lower indices first on ties
  });
  order.resize(static_cast<std::size_t>(width));
  return order;
}

}  // namespace specdec
