#include "tma/residuals.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tma/error.hpp"
#include "tma/kernels.hpp"

namespace tma {

void check_series(std::span<const double> y) {
  if (y.empty()) throw Error(ErrorKind::Data, "series is empty");
  for (std::size_t t = 0; t < y.size(); ++t) {
    if (!std::isfinite(y[t])) {
      throw Error(ErrorKind::Data, "non-finite observation at index " + std::to_string(t));
    }
  }
}

std::vector<bool> regime_indicator(std::span<const double> y, int d,
                                   std::optional<double> r) {
  std::vector<bool> out(y.size(), false);
  if (!r) return out;
  const std::size_t lag = static_cast<std::size_t>(d);
  for (std::size_t t = 0; t < y.size(); ++t) {
    const double past = t >= lag ? y[t - lag] : 0.0;
    out[t] = past <= *r;
  }
  return out;
}

namespace detail {

void run_recursion(std::span<const double> y, std::span<const double> phi,
                   std::span<const double> psi, const std::vector<bool>& indicator,
                   std::vector<double>& eps, Eigen::MatrixXd* scores) {
  const std::size_t n = y.size();
  const int p = static_cast<int>(phi.size());
  const int q = static_cast<int>(psi.size());
  eps.assign(n, 0.0);
  if (scores) scores->setZero(static_cast<Eigen::Index>(n), p + q);

  std::vector<double> coef(p);
  for (std::size_t t = 0; t < n; ++t) {
    const bool low = q > 0 && indicator[t];
    for (int i = 0; i < p; ++i) coef[i] = (low && i < q) ? phi[i] + psi[i] : phi[i];

    const int lags = static_cast<int>(std::min<std::size_t>(t, p));
    double v = y[t];
    for (int i = 1; i <= lags; ++i) v -= coef[i - 1] * eps[t - i];
    eps[t] = v;

    if (!scores) continue;
    auto& U = *scores;
    const auto row = static_cast<Eigen::Index>(t);
    for (int k = 1; k <= p; ++k) {
      double g = t >= static_cast<std::size_t>(k) ? -eps[t - k] : 0.0;
      for (int i = 1; i <= lags; ++i) g -= coef[i - 1] * U(row - i, k - 1);
      U(row, k - 1) = g;
    }
    for (int l = 1; l <= q; ++l) {
      double g = (low && t >= static_cast<std::size_t>(l)) ? -eps[t - l] : 0.0;
      for (int i = 1; i <= lags; ++i) g -= coef[i - 1] * U(row - i, p + l - 1);
      U(row, p + l - 1) = g;
    }
  }
}

}  // namespace detail

namespace {

void require_invertible_with_threshold(const TmaParams& params,
                                       const ModelOrders& orders) {
  params.check_lengths(orders);
  if (!params.r) throw Error(ErrorKind::InvalidSpec, "threshold r is required");
  const auto inv = check_invertibility(params.phi, params.psi);
  if (!inv.ok) {
    throw Error(ErrorKind::Domain,
                "parameters violate the invertibility condition (a = " +
                    std::to_string(inv.a) + ")");
  }
}

}  // namespace

ResidualSet residuals_ma(std::span<const double> y, std::span<const double> phi) {
  if (phi.empty()) throw Error(ErrorKind::InvalidOrders, "phi must be nonempty");
  check_series(y);
  ResidualSet res;
  res.indicator.assign(y.size(), false);
  detail::run_recursion(y, phi, {}, res.indicator, res.eps, nullptr);
  return res;
}

ResidualSet residuals_tma(std::span<const double> y, const TmaParams& params,
                          const ModelOrders& orders) {
  require_invertible_with_threshold(params, orders);
  check_series(y);
  ResidualSet res;
  res.indicator = regime_indicator(y, orders.d, params.r);
  detail::run_recursion(y, params.phi, params.psi, res.indicator, res.eps, nullptr);
  return res;
}

int default_truncation(double a, int p) {
  if (a <= 0.0) return std::max(1, p);
  const double blocks = std::ceil(std::log(1e-12) / std::log(a));
  return std::max(1, p * static_cast<int>(blocks) + p);
}

ResidualSet residuals_via_expansion(std::span<const double> y,
                                    const TmaParams& params,
                                    const ModelOrders& orders,
                                    std::optional<int> truncation) {
  require_invertible_with_threshold(params, orders);
  check_series(y);
  const int p = orders.p;
  const auto psi = params.padded_psi();
  const int J = truncation ? *truncation
                           : default_truncation(check_invertibility(params.phi, params.psi).a, p);
  if (J < 0) throw Error(ErrorKind::InvalidSpec, "truncation must be nonnegative");

  ResidualSet res;
  res.indicator = regime_indicator(y, orders.d, params.r);
  const std::size_t n = y.size();
  res.eps.assign(n, 0.0);

  // Row vector v = u' A_t A_{t-1} ... A_{t-j+1}; only its first entry is
  // needed for the weight, but the whole row carries the product forward.
  std::vector<double> v(p), next(p), coef(p);
  for (std::size_t t = 0; t < n; ++t) {
    std::fill(v.begin(), v.end(), 0.0);
    v[0] = 1.0;
    double e = y[t];
    const std::size_t depth = std::min<std::size_t>(t, static_cast<std::size_t>(J));
    for (std::size_t j = 1; j <= depth; ++j) {
      const std::size_t s = t - j + 1;  // A_s, indicator of y_{s-d}
      const bool low = res.indicator[s];
      for (int i = 0; i < p; ++i) coef[i] = low ? params.phi[i] + psi[i] : params.phi[i];
      for (int k = 0; k < p; ++k) {
        next[k] = -v[0] * coef[k] + (k + 1 < p ? v[k + 1] : 0.0);
      }
      v.swap(next);
      e += v[0] * y[t - j];
    }
    res.eps[t] = e;
  }
  return res;
}

ScoreSet score_tma(std::span<const double> y, const TmaParams& params,
                   const ModelOrders& orders) {
  require_invertible_with_threshold(params, orders);
  check_series(y);
  const auto indicator = regime_indicator(y, orders.d, params.r);
  std::vector<double> eps;
  ScoreSet out;
  detail::run_recursion(y, params.phi, params.psi, indicator, eps, &out.U);
  return out;
}

double sse(const ResidualSet& res) { return kernels::sum_squares(res.eps); }

}  // namespace tma
