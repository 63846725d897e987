#pragma once

#include <cstdint>
#include <vector>

#include "specdec/errors.hpp"
#include "specdec/rng.hpp"

namespace specdec {

using TokenId = std::int32_t;

// Absolute tolerance on "probabilities sum to 1".
inline constexpr double kSumTolerance = 1e-9;
// Constructors quietly renormalize when the sum deviates by at most this much.
inline constexpr double kRenormTolerance = 1e-6;
// Default additive-uniform floor applied to the second argument of the KL
// divergence, keeping it finite when q(y) = 0 but p(y) > 0.
inline constexpr double kDefaultKlFloor = 1e-8;

// Probability distribution over a token vocabulary [0, vocab_size).
// Immutable after construction; entries are non-negative and sum to 1
// within kSumTolerance (the constructor renormalizes small drift and
// rejects anything worse).
class Distribution {
 public:
  explicit Distribution(std::vector<double> probs);

  static Distribution uniform(int vocab_size);
  static Distribution point_mass(TokenId token, int vocab_size);

  int vocab_size() const { return static_cast<int>(probs_.size()); }
  double operator[](TokenId y) const { return probs_[static_cast<std::size_t>(y)]; }
  const std::vector<double>& probs() const { return probs_; }

  // Highest-probability token, ties broken by lowest token index.
  TokenId argmax() const;

 private:
  std::vector<double> probs_;
};

// Convex weights over m drafting sources. Same invariants as Distribution
// but kept as a distinct type: mixing up the two is always a bug.
class WeightVector {
 public:
  explicit WeightVector(std::vector<double> weights);

  static WeightVector uniform(int m);
  static WeightVector one_hot(int index, int m);

  int m() const { return static_cast<int>(weights_.size()); }
  double operator[](int i) const { return weights_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<double> weights_;
};

// Entry-wise convex combination sum_i w_i * dists[i].
Distribution weighted_average(const std::vector<Distribution>& dists, const WeightVector& w);

// KL divergence D(p || q') in nats, where q' = (1-floor)*q + floor*uniform.
// Terms with p(y) = 0 contribute zero. floor must lie in [0, 1e-3].
double kl_divergence(const Distribution& p, const Distribution& q, double floor = kDefaultKlFloor);

// Total variation distance 0.5 * sum_y |p(y) - q(y)|, in [0, 1].
double tvd(const Distribution& p, const Distribution& q);

// Normalized positive part of p - q: norm(max(0, p - q)). This is the
// distribution a rejected token is resampled from. Throws NoResidualMass
// when p and q agree so closely that no mass remains.
Distribution residual_distribution(const Distribution& p, const Distribution& q);

// Inverse-CDF sample: walk the cumulative sums in token-index order and
// return the first token whose cumulative probability exceeds the draw.
TokenId sample(const Distribution& d, Rng& rng);

// The `width` highest-probability tokens in descending probability order,
// ties broken by lower token index.
std::vector<TokenId> top_d(const Distribution& d, int width);

}  // namespace specdec
