// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include <algorithm>
#include <limits>

#include "tma/kernels.hpp"

namespace tma::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

inline double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_max_sd(lo, swapped));
}

}  // namespace

double dot(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  const double* px = x.data();
  const double* py = y.data();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(px + i), _mm256_loadu_pd(py + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(px + i + 4), _mm256_loadu_pd(py + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(px + i), _mm256_loadu_pd(py + i), acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += px[i] * py[i];
  return s;
}

double sum_squares(std::span<const double> x) { return dot(x, x); }

void axpy(double a, std::span<const double> x, std::span<double> y) {
  const std::size_t n = x.size();
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y.data() + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x.data() + i), vy);
    _mm256_storeu_pd(y.data() + i, vy);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void add_squares(std::span<const double> x, std::span<double> acc) {
  const std::size_t n = x.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vx = _mm256_loadu_pd(x.data() + i);
    __m256d va = _mm256_loadu_pd(acc.data() + i);
    _mm256_storeu_pd(acc.data() + i, _mm256_fmadd_pd(vx, vx, va));
  }
  for (; i < n; ++i) acc[i] += x[i] * x[i];
}

double max_weighted_square(std::span<const double> x, std::span<const double> w) {
  const std::size_t n = x.size();
  double best = -std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  if (n >= 4) {
    __m256d vbest = _mm256_set1_pd(best);
    for (; i + 4 <= n; i += 4) {
      __m256d vx = _mm256_loadu_pd(x.data() + i);
      __m256d v = _mm256_mul_pd(_mm256_loadu_pd(w.data() + i), _mm256_mul_pd(vx, vx));
      vbest = _mm256_max_pd(vbest, v);
    }
    best = hmax(vbest);
  }
  for (; i < n; ++i) best = std::max(best, w[i] * (x[i] * x[i]));
  return best;
}

double max_product(std::span<const double> x, std::span<const double> w) {
  const std::size_t n = x.size();
  double best = -std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  if (n >= 4) {
    __m256d vbest = _mm256_set1_pd(best);
    for (; i + 4 <= n; i += 4) {
      __m256d v = _mm256_mul_pd(_mm256_loadu_pd(w.data() + i), _mm256_loadu_pd(x.data() + i));
      vbest = _mm256_max_pd(vbest, v);
    }
    best = hmax(vbest);
  }
  for (; i < n; ++i) best = std::max(best, w[i] * x[i]);
  return best;
}

void lower_tri_matvec(std::span<const double> L, std::size_t m,
                      std::span<const double> z, std::span<double> out) {
  for (std::size_t i = 0; i < m; ++i) {
    out[i] = dot(L.subspan(i * m, i + 1), z.first(i + 1));
  }
}

}  // namespace tma::kernels::avx2
