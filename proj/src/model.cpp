#include "tma/model.hpp"

#include <cmath>
#include <string>

#include "tma/error.hpp"

namespace tma {

void ModelOrders::validate() const {
  if (p < 1 || q < 1 || d < 1 || q > p) {
    throw Error(ErrorKind::InvalidOrders,
                "model orders must satisfy p >= q >= 1 and d >= 1 (got p=" +
                    std::to_string(p) + ", q=" + std::to_string(q) +
                    ", d=" + std::to_string(d) + ")");
  }
}

std::vector<double> TmaParams::padded_psi() const {
  std::vector<double> out(phi.size(), 0.0);
  for (std::size_t i = 0; i < psi.size() && i < out.size(); ++i) out[i] = psi[i];
  return out;
}

void TmaParams::check_lengths(const ModelOrders& orders) const {
  orders.validate();
  if (phi.size() != static_cast<std::size_t>(orders.p) ||
      psi.size() != static_cast<std::size_t>(orders.q)) {
    throw Error(ErrorKind::InvalidOrders,
                "parameter lengths (" + std::to_string(phi.size()) + ", " +
                    std::to_string(psi.size()) + ") do not match orders (p=" +
                    std::to_string(orders.p) + ", q=" +
                    std::to_string(orders.q) + ")");
  }
}

Invertibility check_invertibility(std::span<const double> phi,
                                  std::span<const double> psi) {
  if (phi.empty()) throw Error(ErrorKind::InvalidOrders, "phi must be nonempty");
  if (psi.size() > phi.size()) {
    throw Error(ErrorKind::InvalidOrders, "psi may not be longer than phi");
  }
  double s_phi = 0.0;
  double s_shift = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double shifted = phi[i] + (i < psi.size() ? psi[i] : 0.0);
    s_phi += std::abs(phi[i]);
    s_shift += std::abs(shifted);
  }
  Invertibility inv;
  inv.a = std::max(s_phi, s_shift);
  inv.ok = std::isfinite(inv.a) && inv.a < 1.0 - kInvertibilityMargin;
  return inv;
}

CompanionPair companion_matrices(const TmaParams& params,
                                 const ModelOrders& orders) {
  params.check_lengths(orders);
  const int p = orders.p;
  const auto psi = params.padded_psi();
  CompanionPair pair{Eigen::MatrixXd::Zero(p, p), Eigen::MatrixXd::Zero(p, p)};
  for (int j = 0; j < p; ++j) {
    pair.Phi(0, j) = -params.phi[j];
    pair.Psi(0, j) = -psi[j];
  }
  for (int i = 1; i < p; ++i) pair.Phi(i, i - 1) = 1.0;
  return pair;
}

double max_row_sum_norm(const Eigen::MatrixXd& m) {
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

std::vector<double> product_norm_sequence(const CompanionPair& pair,
                                          const std::vector<bool>& indicators) {
  const int p = pair.order();
  std::vector<double> phi(p), psi(p);
  for (int j = 0; j < p; ++j) {
    phi[j] = -pair.Phi(0, j);
    psi[j] = -pair.Psi(0, j);
  }
  if (!check_invertibility(phi, psi).ok) {
    throw Error(ErrorKind::Domain, "companion pair is not invertible");
  }
  const Eigen::MatrixXd shifted = pair.Phi + pair.Psi;
  std::vector<double> out;
  out.reserve(indicators.size());
  Eigen::MatrixXd prod = Eigen::MatrixXd::Identity(p, p);
  for (bool ind : indicators) {
    prod = prod * (ind ? shifted : pair.Phi);
    out.push_back(max_row_sum_norm(prod));
  }
  return out;
}

double geometric_envelope(double a, int p, int j) {
  return std::pow(a, static_cast<double>(j / p));
}

}  // namespace tma
