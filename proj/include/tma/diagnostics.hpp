#pragma once

// Residual autocorrelation, Ljung-Box portmanteau statistic and AIC.

#include <cstddef>
#include <span>
#include <vector>

namespace tma {

struct PortmanteauResult {
  std::size_t M = 0;
  double Q = 0.0;
  std::size_t df = 0;
  double p_value = 1.0;
};

/// Sample autocorrelations rho_0 .. rho_max_lag.
std::vector<double> acf(std::span<const double> x, std::size_t max_lag);

/// Q = n (n + 2) sum_{k<=M} rho_k^2 / (n - k) against chi^2 with
/// M - fitted_params degrees of freedom.
PortmanteauResult ljung_box(std::span<const double> residuals, std::size_t M,
                            std::size_t fitted_params);

/// Upper-tail chi-square probability.
double chi_square_upper_tail(double x, double df);
double chi_square_upper_quantile(double alpha, double df);

/// n ln(sse / n) + 2 k.
double aic(std::size_t n, double sse, std::size_t k_params);

}  // namespace tma
