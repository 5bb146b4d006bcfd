#pragma once

// Domain types for threshold moving-average models
//
//   y_t = e_t + sum_{i<=p} phi_i e_{t-i} + sum_{i<=q} psi_i I(y_{t-d} <= r) e_{t-i}
//
// together with the invertibility condition and the companion-matrix
// machinery that bounds the invertible expansion of the residuals.

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace tma {

/// Margin below 1 that the contraction constant must respect.
inline constexpr double kInvertibilityMargin = 1e-9;

/// The triple (p, q, d): p MA lags, q threshold-shifted lags, delay d.
struct ModelOrders {
  int p = 1;
  int q = 1;
  int d = 1;

  /// Throws ErrorKind::InvalidOrders unless p >= q >= 1 and d >= 1.
  void validate() const;

  int num_params() const { return p + q; }
};

struct TmaParams {
  std::vector<double> phi;
  std::vector<double> psi;
  std::optional<double> r;

  /// psi padded with zeros to the length of phi.
  std::vector<double> padded_psi() const;
  /// Throws unless phi has p entries and psi has q entries.
  void check_lengths(const ModelOrders& orders) const;
};

struct Invertibility {
  bool ok = false;
  /// max(sum |phi_i|, sum |phi_i + psi_i|)
  double a = 0.0;
};

/// Contraction constant of the threshold recursion. psi may be shorter than
/// phi and is zero-padded. ok iff a < 1 - kInvertibilityMargin.
Invertibility check_invertibility(std::span<const double> phi,
                                  std::span<const double> psi);

struct CompanionPair {
  Eigen::MatrixXd Phi;
  Eigen::MatrixXd Psi;

  int order() const { return static_cast<int>(Phi.rows()); }
};

CompanionPair companion_matrices(const TmaParams& params,
                                 const ModelOrders& orders);

/// Induced infinity norm (max absolute row sum).
double max_row_sum_norm(const Eigen::MatrixXd& m);

/// Entry j-1 holds || prod_{i=1}^{j} (Phi + Psi * indicators[i-1]) || for
/// j = 1..J. Throws ErrorKind::Domain when the pair is not invertible.
std::vector<double> product_norm_sequence(const CompanionPair& pair,
                                          const std::vector<bool>& indicators);

/// Upper bound a^floor(j/p) on the j-th product norm. The constant in front
/// is 1 under the max-row-sum norm since every factor has row sums <= 1.
double geometric_envelope(double a, int p, int j);

}  // namespace tma
