#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tma/model.hpp"

namespace tma {

using Series = std::vector<double>;

inline constexpr std::size_t kDefaultBurnIn = 200;

enum class Distribution { StandardNormal, StudentT, UniformCentered };

/// Innovation law. All three laws are standardized to variance sigma^2;
/// student-t needs df > 4 for a finite fourth moment.
struct InnovationSpec {
  Distribution distribution = Distribution::StandardNormal;
  double df = 0.0;
  double sigma = 1.0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  void validate() const;
};

Series gen_innovations(const InnovationSpec& spec, std::size_t n);

/// Runs the threshold recursion with zero pre-sample values, using
/// innovations[0 .. burn_in + n) and discarding the first burn_in outputs.
/// params.r must be set. The invertibility condition is not required.
Series simulate_tma(const ModelOrders& orders, const TmaParams& params,
                    std::span<const double> innovations, std::size_t n,
                    std::size_t burn_in = kDefaultBurnIn);

/// Path under the drifting alternative psi = h / sqrt(n), r = r0.
Series simulate_local_alternative(const ModelOrders& orders,
                                  std::span<const double> phi,
                                  std::span<const double> h, double r0,
                                  std::size_t n, const InnovationSpec& spec,
                                  std::size_t burn_in = kDefaultBurnIn);

/// Convenience: innovations from spec, then simulate_tma.
Series simulate_tma(const ModelOrders& orders, const TmaParams& params,
                    std::size_t n, const InnovationSpec& spec,
                    std::size_t burn_in = kDefaultBurnIn);

}  // namespace tma
