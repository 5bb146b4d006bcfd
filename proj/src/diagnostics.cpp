#include "tma/diagnostics.hpp"

#include <cmath>
#include <string>

#include <boost/math/distributions/chi_squared.hpp>

#include "tma/error.hpp"
#include "tma/kernels.hpp"

namespace tma {

std::vector<double> acf(std::span<const double> x, std::size_t max_lag) {
  const std::size_t n = x.size();
  if (max_lag >= n) {
    throw Error(ErrorKind::Length, "max_lag must be smaller than the series length");
  }
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  std::vector<double> centered(x.begin(), x.end());
  for (auto& v : centered) v -= mean;
  const double denom = kernels::sum_squares(centered);
  if (!(denom > 0.0)) throw Error(ErrorKind::UndefinedAcf, "autocorrelation of a constant series");
  std::vector<double> out(max_lag + 1);
  out[0] = 1.0;
  const std::span<const double> c(centered);
  for (std::size_t k = 1; k <= max_lag; ++k) {
    out[k] = kernels::dot(c.subspan(k), c.first(n - k)) / denom;
  }
  return out;
}

double chi_square_upper_tail(double x, double df) {
  if (x <= 0.0) return 1.0;
  boost::math::chi_squared dist(df);
  return boost::math::cdf(boost::math::complement(dist, x));
}

double chi_square_upper_quantile(double alpha, double df) {
  boost::math::chi_squared dist(df);
  return boost::math::quantile(boost::math::complement(dist, alpha));
}

PortmanteauResult ljung_box(std::span<const double> residuals, std::size_t M,
                            std::size_t fitted_params) {
  if (M <= fitted_params) {
    throw Error(ErrorKind::InvalidDf, "Ljung-Box lag count " + std::to_string(M) +
                                          " must exceed the fitted parameter count " +
                                          std::to_string(fitted_params));
  }
  const auto rho = acf(residuals, M);
  const double n = static_cast<double>(residuals.size());
  double sum = 0.0;
  for (std::size_t k = 1; k <= M; ++k) sum += rho[k] * rho[k] / (n - static_cast<double>(k));
  PortmanteauResult out;
  out.M = M;
  out.Q = n * (n + 2.0) * sum;
  out.df = M - fitted_params;
  out.p_value = chi_square_upper_tail(out.Q, static_cast<double>(out.df));
  return out;
}

double aic(std::size_t n, double sse, std::size_t k_params) {
  if (!(sse > 0.0)) throw Error(ErrorKind::Domain, "AIC needs a positive sum of squares");
  const double dn = static_cast<double>(n);
  return dn * std::log(sse / dn) + 2.0 * static_cast<double>(k_params);
}

}  // namespace tma
