#pragma once

// Conditional residuals of the MA and threshold-MA recursions with zero
// initial values, their analytic derivatives, and the invertible expansion
// that serves as an independent route to the same residuals.

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "tma/model.hpp"

namespace tma {

struct ResidualSet {
  std::vector<double> eps;
  /// indicator[t] = I(y_{t-d} <= r), with y_s = 0 for s <= 0.
  std::vector<bool> indicator;
};

/// Row t holds (d eps_t / d phi', d eps_t / d psi').
struct ScoreSet {
  Eigen::MatrixXd U;
};

/// Regime indicators I(y_{t-d} <= r) with y_s = 0 for s <= 0. An absent
/// threshold means r = -inf, so every entry is false.
std::vector<bool> regime_indicator(std::span<const double> y, int d,
                                   std::optional<double> r);

ResidualSet residuals_ma(std::span<const double> y, std::span<const double> phi);

/// Throws ErrorKind::Domain for non-invertible parameters and
/// ErrorKind::InvalidSpec when params.r is absent.
ResidualSet residuals_tma(std::span<const double> y, const TmaParams& params,
                          const ModelOrders& orders);

/// Truncation count that puts the geometric tail below 1e-12 relative.
int default_truncation(double a, int p);

/// Residuals from the truncated expansion
///   eps_t = y_t + sum_{j=1}^{J} u' prod_{i=1}^{j} [Phi + Psi I(y_{t-d-i+1} <= r)] u y_{t-j}.
/// With truncation unset, default_truncation() is used.
ResidualSet residuals_via_expansion(std::span<const double> y,
                                    const TmaParams& params,
                                    const ModelOrders& orders,
                                    std::optional<int> truncation = std::nullopt);

ScoreSet score_tma(std::span<const double> y, const TmaParams& params,
                   const ModelOrders& orders);

double sse(const ResidualSet& res);

/// Throws ErrorKind::Data when y is empty or holds a non-finite value.
void check_series(std::span<const double> y);

namespace detail {

/// The shared recursion: residuals into eps and, when scores is non-null,
/// the n x (p + q) derivative matrix. No invertibility check; psi may be
/// empty (pure MA) and is otherwise at most as long as phi.
void run_recursion(std::span<const double> y, std::span<const double> phi,
                   std::span<const double> psi, const std::vector<bool>& indicator,
                   std::vector<double>& eps, Eigen::MatrixXd* scores);

}  // namespace detail

}  // namespace tma
