#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference version and
// an AVX2 version; the dispatching entry points pick one at first use based
// on the running CPU. Reductions in the vector versions sum in a different
// order, so results agree with the scalar reference to rounding, not bitwise.

#include <cstddef>
#include <span>
#include <string_view>

namespace tma::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

bool isa_supported(Isa isa);
Isa active_isa();
/// Pin the dispatch target (tests and benchmarks). Throws ErrorKind::InvalidSpec
/// when the CPU or the build lacks the requested instruction set.
void force_isa(Isa isa);
/// Return to automatic selection.
void reset_isa();

double dot(std::span<const double> x, std::span<const double> y);
double sum_squares(std::span<const double> x);
/// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);
/// acc += x * x (elementwise)
void add_squares(std::span<const double> x, std::span<double> acc);
/// max_i w_i * x_i^2; -inf for empty input.
double max_weighted_square(std::span<const double> x, std::span<const double> w);
/// max_i w_i * x_i; -inf for empty input.
double max_product(std::span<const double> x, std::span<const double> w);
/// out = L z for a row-major m x m matrix whose strictly upper part is ignored.
void lower_tri_matvec(std::span<const double> L, std::size_t m,
                      std::span<const double> z, std::span<double> out);

namespace scalar {
double dot(std::span<const double> x, std::span<const double> y);
double sum_squares(std::span<const double> x);
void axpy(double a, std::span<const double> x, std::span<double> y);
void add_squares(std::span<const double> x, std::span<double> acc);
double max_weighted_square(std::span<const double> x, std::span<const double> w);
double max_product(std::span<const double> x, std::span<const double> w);
void lower_tri_matvec(std::span<const double> L, std::size_t m,
                      std::span<const double> z, std::span<double> out);
}  // namespace scalar

namespace avx2 {
double dot(std::span<const double> x, std::span<const double> y);
double sum_squares(std::span<const double> x);
void axpy(double a, std::span<const double> x, std::span<double> y);
void add_squares(std::span<const double> x, std::span<double> acc);
double max_weighted_square(std::span<const double> x, std::span<const double> w);
double max_product(std::span<const double> x, std::span<const double> w);
void lower_tri_matvec(std::span<const double> L, std::size_t m,
                      std::span<const double> z, std::span<double> out);
}  // namespace avx2

}  // namespace tma::kernels
