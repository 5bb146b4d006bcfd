#include <algorithm>
#include <limits>

#include "tma/kernels.hpp"

namespace tma::kernels::scalar {

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double sum_squares(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

void add_squares(std::span<const double> x, std::span<double> acc) {
  for (std::size_t i = 0; i < x.size(); ++i) acc[i] += x[i] * x[i];
}

double max_weighted_square(std::span<const double> x, std::span<const double> w) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x.size(); ++i) best = std::max(best, w[i] * (x[i] * x[i]));
  return best;
}

double max_product(std::span<const double> x, std::span<const double> w) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x.size(); ++i) best = std::max(best, w[i] * x[i]);
  return best;
}

void lower_tri_matvec(std::span<const double> L, std::size_t m,
                      std::span<const double> z, std::span<double> out) {
  for (std::size_t i = 0; i < m; ++i) {
    out[i] = dot(L.subspan(i * m, i + 1), z.first(i + 1));
  }
}

}  // namespace tma::kernels::scalar
