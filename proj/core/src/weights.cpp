#include "specdec/weights.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "specdec/errors.hpp"

namespace specdec {
namespace {

constexpr double kErrorClamp = 1e-12;

// Fraction of window positions where source i's argmax misses the realized
// token, Laplace-smoothed into (0, 1) so boost-style weights stay defined
// even for a source that is always right (or always wrong) in the window.
std::vector<double> mismatch_rates(const HistoryCache& cache) {
  const auto window = cache.recent();
  std::vector<double> eps(static_cast<std::size_t>(cache.num_sources()), 0.5);
  for (int i = 0; i < cache.num_sources(); ++i) {
    double miss = 0.0;
    for (const HistoryEntry& e : window) {
      if (e.source_dists[static_cast<std::size_t>(i)].argmax() != e.realized_token) {
        miss += 1.0;
      }
    }
    eps[static_cast<std::size_t>(i)] =
        (miss + 0.5) / (static_cast<double>(window.size()) + 1.0);
  }
  return eps;
}

// Raw mismatch counts, used as the per-source "error" for the hard
// criterion under the softmax policy (hard scores are negated counts, which
// cannot feed an inverse directly).
std::vector<double> mismatch_counts(const HistoryCache& cache) {
  const auto window = cache.recent();
  std::vector<double> miss(static_cast<std::size_t>(cache.num_sources()), 0.0);
  for (int i = 0; i < cache.num_sources(); ++i) {
    for (const HistoryEntry& e : window) {
      if (e.source_dists[static_cast<std::size_t>(i)].argmax() != e.realized_token) {
        miss[static_cast<std::size_t>(i)] += 1.0;
      }
    }
  }
  return miss;
}

}  // namespace

WeightPolicy WeightPolicy::grid(int n) {
  WeightPolicy p;
  p.kind = Kind::kGrid;
  p.grid_n = n;
  return p;
}

WeightPolicy WeightPolicy::softmax(double tau) {
  WeightPolicy p;
  p.kind = Kind::kSoftmaxInverseError;
  p.tau = tau;
  return p;
}

WeightPolicy WeightPolicy::adaboost(double c) {
  WeightPolicy p;
  p.kind = Kind::kAdaboost;
  p.boost_c = c;
  return p;
}

WeightPolicy WeightPolicy::fixed(WeightVector w) {
  WeightPolicy p;
  p.kind = Kind::kFixed;
  p.fixed_w = std::move(w);
  return p;
}

std::vector<WeightVector> grid_candidates(int n) {
  if (n < 1) throw BadParams("grid_candidates: n must be >= 1");
  std::vector<WeightVector> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) {
    const double b = static_cast<double>(j) / n;
    out.push_back(WeightVector({1.0 - b, b}));
  }
  return out;
}

WeightVector softmax_inverse_error(const std::vector<double>& errors, double tau) {
  if (!(tau > 0.0)) throw BadParams("softmax_inverse_error: tau must be > 0");
  if (errors.empty()) throw BadParams("softmax_inverse_error: no errors");
  std::vector<double> logits(errors.size());
  for (std::size_t i = 0; i < errors.size(); ++i) {
    const double e = std::max(errors[i], kErrorClamp);
    logits[i] = (1.0 / e) / tau;
  }
  // Shift by the max logit so exp never overflows (1/1e-12 is a huge logit).
  const double shift = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  std::vector<double> w(errors.size());
  for (std::size_t i = 0; i < errors.size(); ++i) {
    w[i] = std::exp(logits[i] - shift);
    sum += w[i];
  }
  for (double& x : w) x /= sum;
  return WeightVector(std::move(w));
}

WeightVector adaboost_weights(const std::vector<double>& eps, int vocab_size,
                              double c) {
  if (eps.empty()) throw BadParams("adaboost_weights: no error rates");
  if (vocab_size < 2) throw BadParams("adaboost_weights: vocab_size must be >= 2");
  std::vector<double> raw(eps.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0) || !(eps[i] < 1.0)) {
      throw EpsOutOfDomain("adaboost_weights: eps " + std::to_string(eps[i]) +
                           " outside (0, 1)");
    }
    raw[i] = std::max(0.0, std::log(1.0 / eps[i] - 1.0) +
                               c * std::log(static_cast<double>(vocab_size) - 1.0));
    sum += raw[i];
  }
  if (sum <= 0.0) {
    // Every source at or below chance after clamping; no signal to weight by.
    return WeightVector::uniform(static_cast<int>(eps.size()));
  }
  for (double& x : raw) x /= sum;
  return WeightVector(std::move(raw));
}

double accumulated_error(const HistoryCache& cache, const WeightVector& w,
                         SelectionCriterion criterion, double floor) {
  if (cache.empty()) throw EmptyHistory("accumulated_error: cache is empty");
  if (w.m() != cache.num_sources()) {
    throw DimensionMismatch("accumulated_error: weight arity " +
                            std::to_string(w.m()) + " vs " +
                            std::to_string(cache.num_sources()) + " sources");
  }
  double acc = 0.0;
  for (const HistoryEntry& e : cache.recent()) {
    const Distribution ensemble = weighted_average(e.source_dists, w);
    switch (criterion) {
      case SelectionCriterion::kSoftKl:
        acc += kl_divergence(e.target_dist, ensemble, floor);
        break;
      case SelectionCriterion::kSoftTvd:
        acc += tvd(e.target_dist, ensemble);
        break;
      case SelectionCriterion::kHardMatch:
        if (ensemble.argmax() == e.realized_token) acc -= 1.0;
        break;
    }
  }
  return acc;
}

WeightVector select_weight(const HistoryCache& cache, const WeightPolicy& policy,
                           SelectionCriterion criterion) {
  const int m = cache.num_sources();
  if (policy.kind == WeightPolicy::Kind::kFixed) {
    if (!policy.fixed_w) throw BadParams("select_weight: fixed policy without weights");
    if (policy.fixed_w->m() != m) {
      throw DimensionMismatch("select_weight: fixed weights arity mismatch");
    }
    return *policy.fixed_w;
  }
  if (cache.empty()) return WeightVector::uniform(m);

  switch (policy.kind) {
    case WeightPolicy::Kind::kGrid: {
      if (m != 2) {
        throw UnsupportedArity("select_weight: grid policy needs exactly 2 sources, got " +
                               std::to_string(m));
      }
      const std::vector<WeightVector> candidates = grid_candidates(policy.grid_n);
      std::size_t best = 0;
      double best_err = accumulated_error(cache, candidates[0], criterion);
      for (std::size_t j = 1; j < candidates.size(); ++j) {
        const double err = accumulated_error(cache, candidates[j], criterion);
        if (err < best_err) {
          best = j;
          best_err = err;
        }
      }
      return candidates[best];
    }
    case WeightPolicy::Kind::kSoftmaxInverseError: {
      std::vector<double> errors;
      if (criterion == SelectionCriterion::kHardMatch) {
        errors = mismatch_counts(cache);
      } else {
        errors.reserve(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) {
          errors.push_back(
              accumulated_error(cache, WeightVector::one_hot(i, m), criterion));
        }
      }
      return softmax_inverse_error(errors, policy.tau);
    }
    case WeightPolicy::Kind::kAdaboost: {
      const int vocab = cache.entries().front().target_dist.vocab_size();
      if (vocab < 2) return WeightVector::uniform(m);
      return adaboost_weights(mismatch_rates(cache), vocab, policy.boost_c);
    }
    case WeightPolicy::Kind::kFixed:
      break;  // handled above
  }
  throw BadParams("select_weight: unknown policy kind");
}

}  // namespace specdec
