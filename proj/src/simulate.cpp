#include "tma/simulate.hpp"

#include <cmath>
#include <random>
#include <string>

#include "tma/error.hpp"
#include "tma/rng.hpp"

namespace tma {

void InnovationSpec::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorKind::InvalidSpec, "innovation sigma must be positive");
  }
  if (distribution == Distribution::StudentT && !(df > 4.0)) {
    throw Error(ErrorKind::InvalidSpec,
                "student-t innovations need df > 4 (got " + std::to_string(df) + ")");
  }
}

Series gen_innovations(const InnovationSpec& spec, std::size_t n) {
  spec.validate();
  if (n == 0) throw Error(ErrorKind::Length, "innovation count must be positive");
  Rng rng(spec.seed, spec.stream, StreamPurpose::Innovations);
  Series out(n);
  switch (spec.distribution) {
    case Distribution::StandardNormal:
      for (auto& v : out) v = rng.normal() * spec.sigma;
      break;
    case Distribution::StudentT: {
      std::student_t_distribution<double> t(spec.df);
      const double scale = spec.sigma * std::sqrt((spec.df - 2.0) / spec.df);
      for (auto& v : out) v = t(rng.engine()) * scale;
      break;
    }
    case Distribution::UniformCentered: {
      const double half_width = std::sqrt(3.0) * spec.sigma;
      for (auto& v : out) v = (2.0 * rng.uniform() - 1.0) * half_width;
      break;
    }
  }
  return out;
}

Series simulate_tma(const ModelOrders& orders, const TmaParams& params,
                    std::span<const double> innovations, std::size_t n,
                    std::size_t burn_in) {
  params.check_lengths(orders);
  if (!params.r) throw Error(ErrorKind::InvalidSpec, "simulation needs a threshold r");
  const std::size_t total = burn_in + n;
  if (innovations.size() < total) {
    throw Error(ErrorKind::Length, "need " + std::to_string(total) +
                                       " innovations, got " +
                                       std::to_string(innovations.size()));
  }
  const int p = orders.p;
  const int q = orders.q;
  const std::size_t d = static_cast<std::size_t>(orders.d);
  const double r = *params.r;

  Series y(total, 0.0);
  for (std::size_t t = 0; t < total; ++t) {
    // No threshold shift until y_{t-d} is an actual simulated value.
    const bool low = t >= d && y[t - d] <= r;
    double v = innovations[t];
    for (int i = 1; i <= p; ++i) {
      if (t < static_cast<std::size_t>(i)) break;
      double coef = params.phi[i - 1];
      if (low && i <= q) coef += params.psi[i - 1];
      v += coef * innovations[t - i];
    }
    y[t] = v;
  }
  return Series(y.begin() + static_cast<std::ptrdiff_t>(burn_in), y.end());
}

Series simulate_tma(const ModelOrders& orders, const TmaParams& params,
                    std::size_t n, const InnovationSpec& spec,
                    std::size_t burn_in) {
  const auto eps = gen_innovations(spec, burn_in + n);
  return simulate_tma(orders, params, eps, n, burn_in);
}

Series simulate_local_alternative(const ModelOrders& orders,
                                  std::span<const double> phi,
                                  std::span<const double> h, double r0,
                                  std::size_t n, const InnovationSpec& spec,
                                  std::size_t burn_in) {
  if (n == 0) throw Error(ErrorKind::Length, "sample size must be positive");
  TmaParams params;
  params.phi.assign(phi.begin(), phi.end());
  params.psi.resize(h.size());
  const double root_n = std::sqrt(static_cast<double>(n));
  for (std::size_t i = 0; i < h.size(); ++i) params.psi[i] = h[i] / root_n;
  params.r = r0;
  return simulate_tma(orders, params, n, spec, burn_in);
}

}  // namespace tma
