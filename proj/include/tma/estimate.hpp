#pragma once

// Conditional least-squares estimation of MA and threshold-MA models.

#include <cstddef>
#include <span>
#include <vector>

#include "tma/model.hpp"

namespace tma {

struct FitOptions {
  int max_iterations = 200;
  /// Converged when the gradient norm is at most grad_tol * (1 + sse), or
  /// when no step can lower the objective and the predicted decrease is
  /// below 1e-12 relative.
  double grad_tol = 1e-8;
  /// Interior penalty weight * max(0, a - boundary)^2 keeps iterates invertible.
  double penalty_weight = 1e8;
  double boundary = 1.0 - 1e-6;
  /// Offset applied to every psi entry for the two perturbed starts.
  double perturbation = 0.1;
};

struct FitResult {
  TmaParams params;
  double sse = 0.0;
  double sigma2 = 0.0;
  bool converged = false;
  int iterations = 0;
  double grad_norm = 0.0;
};

struct ThresholdGrid {
  /// Sorted, distinct threshold candidates.
  std::vector<double> candidates;
  /// Empirical distribution function at each candidate, #(y <= r) / n.
  std::vector<double> levels;
  double beta1 = 0.1;
  double beta2 = 0.9;

  std::size_t size() const { return candidates.size(); }
};

/// Distinct order statistics y_(ceil(n b1)) .. y_(floor(n b2)), thinned
/// evenly to at most max_points with both endpoints kept. max_points = 0
/// keeps every candidate.
ThresholdGrid threshold_grid(std::span<const double> y, double beta1, double beta2,
                             std::size_t max_points);

/// Evenly spaced subset of an existing grid, endpoints kept; 0 keeps all.
ThresholdGrid thin_grid(const ThresholdGrid& grid, std::size_t max_points);

FitResult fit_ma(std::span<const double> y, int p, const FitOptions& options = {});

/// Gauss-Newton fit of (phi, psi) at a fixed threshold, started from init and
/// from init with psi shifted by +/- options.perturbation; best objective wins.
FitResult fit_tma_fixed_r(std::span<const double> y, const ModelOrders& orders,
                          double r, const TmaParams& init,
                          const FitOptions& options = {});

enum class SweepDirection { Ascending, Descending };

struct ThresholdProfile {
  std::vector<FitResult> per_r;
  /// failed[i] marks a candidate whose fit produced a non-finite objective.
  std::vector<bool> failed;
  std::size_t failures = 0;
  double r_hat = 0.0;
  std::size_t r_hat_index = 0;
};

/// Fits every grid candidate. Each fit starts from the null fit (phi_hat, 0),
/// its two psi perturbations, and the neighbouring candidate's solution.
/// r_hat minimizes sse, ties going to the smallest candidate.
ThresholdProfile profile_threshold(std::span<const double> y, const ModelOrders& orders,
                                   const ThresholdGrid& grid, const FitResult& null_fit,
                                   const FitOptions& options = {},
                                   SweepDirection direction = SweepDirection::Ascending);

ThresholdProfile profile_threshold(std::span<const double> y, const ModelOrders& orders,
                                   const ThresholdGrid& grid,
                                   const FitOptions& options = {});

}  // namespace tma
