#include <atomic>

#include "tma/error.hpp"
#include "tma/kernels.hpp"

namespace tma::kernels {

namespace {

// -1 means automatic selection.
std::atomic<int> g_forced{-1};

Isa detect() {
#if defined(TMA_HAVE_AVX2)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Isa::Avx2;
#endif
  return Isa::Scalar;
}

const Isa g_detected = detect();

}  // namespace

std::string_view to_string(Isa isa) {
  return isa == Isa::Avx2 ? "avx2" : "scalar";
}

bool isa_supported(Isa isa) {
  if (isa == Isa::Scalar) return true;
  return g_detected == Isa::Avx2;
}

Isa active_isa() {
  const int forced = g_forced.load(std::memory_order_relaxed);
  return forced < 0 ? g_detected : static_cast<Isa>(forced);
}

void force_isa(Isa isa) {
  if (!isa_supported(isa)) {
    throw Error(ErrorKind::InvalidSpec,
                "instruction set " + std::string(to_string(isa)) + " is not available");
  }
  g_forced.store(static_cast<int>(isa), std::memory_order_relaxed);
}

void reset_isa() { g_forced.store(-1, std::memory_order_relaxed); }

#if defined(TMA_HAVE_AVX2)
#define TMA_DISPATCH(fn, ...)                                \
  (active_isa() == Isa::Avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__))
#else
#define TMA_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

double dot(std::span<const double> x, std::span<const double> y) {
  return TMA_DISPATCH(dot, x, y);
}

double sum_squares(std::span<const double> x) { return TMA_DISPATCH(sum_squares, x); }

void axpy(double a, std::span<const double> x, std::span<double> y) {
  TMA_DISPATCH(axpy, a, x, y);
}

void add_squares(std::span<const double> x, std::span<double> acc) {
  TMA_DISPATCH(add_squares, x, acc);
}

double max_weighted_square(std::span<const double> x, std::span<const double> w) {
  return TMA_DISPATCH(max_weighted_square, x, w);
}

double max_product(std::span<const double> x, std::span<const double> w) {
  return TMA_DISPATCH(max_product, x, w);
}

void lower_tri_matvec(std::span<const double> L, std::size_t m,
                      std::span<const double> z, std::span<double> out) {
  TMA_DISPATCH(lower_tri_matvec, L, m, z, out);
}

#undef TMA_DISPATCH

}  // namespace tma::kernels
