#pragma once

#include <optional>
#include <vector>

#include "specdec/dist.hpp"
#include "specdec/history.hpp"

namespace specdec {

// How candidate ensemble weights are produced each block.
struct WeightPolicy {
  enum class Kind { kGrid, kSoftmaxInverseError, kAdaboost, kFixed };

  Kind kind = Kind::kGrid;
  int grid_n = 10;                       // grid: candidates [1-j/n, j/n], j = 0..n
  double tau = 1.0;                      // softmax temperature
  double boost_c = 1.0;                  // adaboost constant C
  std::optional<WeightVector> fixed_w;   // fixed: the weights to use verbatim

  static WeightPolicy grid(int n = 10);
  static WeightPolicy softmax(double tau = 1.0);
  static WeightPolicy adaboost(double c = 1.0);
  static WeightPolicy fixed(WeightVector w);
};

// What "error against history" means when scoring a candidate.
enum class SelectionCriterion { kSoftKl, kSoftTvd, kHardMatch };

// Two-source candidate ladder [1-j/n, j/n] for j = 0..n, endpoints included
// so pure single-source drafting is always reachable.
std::vector<WeightVector> grid_candidates(int n);

// w_i proportional to exp((1/e_i)/tau). Errors are clamped below at 1e-12
// before inversion, so a (near-)zero error dominates instead of dividing
// by zero.
WeightVector softmax_inverse_error(const std::vector<double>& errors, double tau);

// Boost-style fixed weights from per-source error rates:
//   raw_i = ln(1/eps_i - 1) + C * ln(K - 1)
// clamped below at 0 and normalized. Every eps_i must lie strictly in
// (0, 1); degenerate all-zero raw weights fall back to uniform.
WeightVector adaboost_weights(const std::vector<double>& eps, int vocab_size, double c);

// Total error of ensemble weights w against the cache's visible window:
// summed KL (target || ensemble) for soft_kl, summed TVD for soft_tvd, and
// the negated count of positions whose ensemble argmax equals the realized
// token for hard_match (negated so that argmin selects the best candidate).
double accumulated_error(const HistoryCache& cache, const WeightVector& w,
                         SelectionCriterion criterion, double floor = kDefaultKlFloor);

// Pick this block's ensemble weights. Empty cache always yields uniform
// weights (cold start). Grid enumerates candidates and takes the argmin of
// accumulated_error (ties to the lowest candidate index); softmax and
// adaboost compute a single candidate from per-source errors; fixed returns
// the stored weights.
WeightVector select_weight(const HistoryCache& cache, const WeightPolicy& policy,
                           SelectionCriterion criterion);

}  // namespace specdec
