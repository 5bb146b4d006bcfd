#include "tma/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tma/error.hpp"
#include "tma/kernels.hpp"
#include "tma/residuals.hpp"

namespace tma {

namespace {

/// Least-squares problem in theta = (phi', psi')' at a fixed regime split.
class ClsProblem {
 public:
  ClsProblem(std::span<const double> y, int p, int q, std::vector<bool> indicator,
             const FitOptions& options)
      : y_(y), p_(p), q_(q), indicator_(std::move(indicator)), options_(options) {}

  int dim() const { return p_ + q_; }

  struct Point {
    Eigen::VectorXd theta;
    double sse = 0.0;
    double objective = 0.0;
  };

  double contraction(const Eigen::VectorXd& theta) const {
    double s_phi = 0.0, s_shift = 0.0;
    for (int i = 0; i < p_; ++i) {
      s_phi += std::abs(theta[i]);
      s_shift += std::abs(theta[i] + (i < q_ ? theta[p_ + i] : 0.0));
    }
    return std::max(s_phi, s_shift);
  }

  double penalty(const Eigen::VectorXd& theta) const {
    const double excess = std::max(0.0, contraction(theta) - options_.boundary);
    return options_.penalty_weight * excess * excess;
  }

  /// Residuals only; returns sse and fills point.
  Point evaluate(const Eigen::VectorXd& theta) {
    run(theta, nullptr);
    Point pt{theta, kernels::sum_squares(eps_), 0.0};
    pt.objective = pt.sse + penalty(theta);
    if (!std::isfinite(pt.objective)) pt.objective = std::numeric_limits<double>::infinity();
    return pt;
  }

  FitResult minimize(Eigen::VectorXd theta) {
    const int k = dim();
    Point cur = evaluate(theta);
    FitResult out;
    Eigen::MatrixXd H(k, k);
    Eigen::VectorXd g(k);
    int it = 0;
    for (;; ++it) {
      run(cur.theta, &scores_);
      // Normal equations from column dot products.
      for (int a = 0; a < k; ++a) {
        const std::span<const double> ca(scores_.col(a).data(), eps_.size());
        g[a] = kernels::dot(ca, eps_);
        for (int b = 0; b <= a; ++b) {
          const std::span<const double> cb(scores_.col(b).data(), eps_.size());
          H(a, b) = H(b, a) = kernels::dot(ca, cb);
        }
      }
      add_penalty_terms(cur.theta, H, g);
      out.grad_norm = 2.0 * g.norm();
      if (!std::isfinite(out.grad_norm)) break;
      if (out.grad_norm <= options_.grad_tol * (1.0 + cur.sse)) {
        out.converged = true;
        break;
      }
      if (it >= options_.max_iterations) break;

      Eigen::VectorXd step = H.ldlt().solve(-g);
      if (!step.allFinite()) {
        const double ridge = 1e-10 * (H.trace() / k + 1.0);
        step = (H + ridge * Eigen::MatrixXd::Identity(k, k)).ldlt().solve(-g);
        if (!step.allFinite()) break;
      }
      bool accepted = false;
      double scale = 1.0;
      for (int h = 0; h < 40; ++h, scale *= 0.5) {
        Point cand = evaluate(cur.theta + scale * step);
        if (cand.objective < cur.objective) {
          cur = std::move(cand);
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        // Stationary to working precision: the predicted decrease is below
        // what the objective can resolve.
        const double predicted = -g.dot(step);
        out.converged = predicted <= 1e-12 * (1.0 + cur.objective);
        break;
      }
    }
    out.iterations = it;
    out.sse = cur.sse;
    out.sigma2 = cur.sse / static_cast<double>(y_.size());
    out.params.phi.assign(cur.theta.data(), cur.theta.data() + p_);
    out.params.psi.assign(cur.theta.data() + p_, cur.theta.data() + p_ + q_);
    objective_ = cur.objective;
    return out;
  }

  double last_objective() const { return objective_; }

 private:
  void run(const Eigen::VectorXd& theta, Eigen::MatrixXd* scores) {
    const std::span<const double> phi(theta.data(), p_);
    const std::span<const double> psi(theta.data() + p_, q_);
    detail::run_recursion(y_, phi, psi, indicator_, eps_, scores);
  }

  /// Gauss-Newton linearization of the interior penalty.
  void add_penalty_terms(const Eigen::VectorXd& theta, Eigen::MatrixXd& H,
                         Eigen::VectorXd& g) const {
    double s_phi = 0.0, s_shift = 0.0;
    for (int i = 0; i < p_; ++i) {
      s_phi += std::abs(theta[i]);
      s_shift += std::abs(theta[i] + (i < q_ ? theta[p_ + i] : 0.0));
    }
    const double a = std::max(s_phi, s_shift);
    const double excess = a - options_.boundary;
    if (excess <= 0.0) return;
    Eigen::VectorXd da = Eigen::VectorXd::Zero(dim());
    auto sign = [](double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); };
    if (s_phi >= s_shift) {
      for (int i = 0; i < p_; ++i) da[i] = sign(theta[i]);
    } else {
      for (int i = 0; i < p_; ++i) {
        const double s = sign(theta[i] + (i < q_ ? theta[p_ + i] : 0.0));
        da[i] = s;
        if (i < q_) da[p_ + i] = s;
      }
    }
    // sse' = 2 U'e; the penalty gradient is 2 w excess da, so both halves
    // share the factor two that grad_norm restores.
    g += options_.penalty_weight * excess * da;
    H += options_.penalty_weight * da * da.transpose();
  }

  std::span<const double> y_;
  int p_;
  int q_;
  std::vector<bool> indicator_;
  FitOptions options_;
  std::vector<double> eps_;
  Eigen::MatrixXd scores_;
  double objective_ = 0.0;
};

Eigen::VectorXd pack(const TmaParams& params, int p, int q) {
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(p + q);
  for (int i = 0; i < p && i < static_cast<int>(params.phi.size()); ++i) theta[i] = params.phi[i];
  for (int i = 0; i < q && i < static_cast<int>(params.psi.size()); ++i) theta[p + i] = params.psi[i];
  return theta;
}

struct BestFit {
  FitResult fit;
  double objective = std::numeric_limits<double>::infinity();
};

void try_start(ClsProblem& problem, const Eigen::VectorXd& start, BestFit& best) {
  FitResult fit = problem.minimize(start);
  const double obj = problem.last_objective();
  if (obj < best.objective) {
    best.objective = obj;
    best.fit = std::move(fit);
  }
}

void check_fit_input(std::span<const double> y, int p) {
  check_series(y);
  if (y.size() <= static_cast<std::size_t>(10 * p)) {
    throw Error(ErrorKind::Length, "need more than " + std::to_string(10 * p) +
                                       " observations to fit order " + std::to_string(p));
  }
}

double lag_one_autocorrelation(std::span<const double> y) {
  const double n = static_cast<double>(y.size());
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= n;
  double num = 0.0, den = 0.0;
  for (std::size_t t = 0; t < y.size(); ++t) {
    den += (y[t] - mean) * (y[t] - mean);
    if (t > 0) num += (y[t] - mean) * (y[t - 1] - mean);
  }
  return den > 0.0 ? num / den : 0.0;
}

}  // namespace

ThresholdGrid threshold_grid(std::span<const double> y, double beta1, double beta2,
                             std::size_t max_points) {
  if (!(beta1 > 0.0 && beta1 < beta2 && beta2 < 1.0)) {
    throw Error(ErrorKind::InvalidSpec, "quantile levels must satisfy 0 < beta1 < beta2 < 1");
  }
  if (max_points == 1) throw Error(ErrorKind::InvalidSpec, "max_points must be 0 or at least 2");
  check_series(y);
  std::vector<double> sorted(y.begin(), y.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  const auto lo = static_cast<std::size_t>(std::max(1.0, std::ceil(n * beta1 - 1e-9)));
  const auto hi = static_cast<std::size_t>(std::min(n, std::floor(n * beta2 + 1e-9)));

  ThresholdGrid grid;
  grid.beta1 = beta1;
  grid.beta2 = beta2;
  for (std::size_t rank = lo; rank <= hi; ++rank) {
    const double v = sorted[rank - 1];
    if (grid.candidates.empty() || v != grid.candidates.back()) grid.candidates.push_back(v);
  }
  if (grid.candidates.size() < 2) {
    throw Error(ErrorKind::DegenerateGrid,
                "fewer than two distinct values between the quantile bounds");
  }
  for (double v : grid.candidates) {
    const auto below = std::upper_bound(sorted.begin(), sorted.end(), v) - sorted.begin();
    grid.levels.push_back(static_cast<double>(below) / n);
  }
  return thin_grid(grid, max_points);
}

ThresholdGrid thin_grid(const ThresholdGrid& grid, std::size_t max_points) {
  if (max_points == 1) throw Error(ErrorKind::InvalidSpec, "max_points must be 0 or at least 2");
  const std::size_t m = grid.size();
  if (max_points == 0 || m <= max_points) return grid;
  ThresholdGrid out;
  out.beta1 = grid.beta1;
  out.beta2 = grid.beta2;
  for (std::size_t i = 0; i < max_points; ++i) {
    const auto idx = static_cast<std::size_t>(
        std::llround(static_cast<double>(i) * static_cast<double>(m - 1) /
                     static_cast<double>(max_points - 1)));
    out.candidates.push_back(grid.candidates[idx]);
    out.levels.push_back(grid.levels[idx]);
  }
  return out;
}

FitResult fit_ma(std::span<const double> y, int p, const FitOptions& options) {
  if (p < 1) throw Error(ErrorKind::InvalidOrders, "MA order must be positive");
  check_fit_input(y, p);
  ClsProblem problem(y, p, 0, std::vector<bool>(y.size(), false), options);
  BestFit best;
  try_start(problem, Eigen::VectorXd::Zero(p), best);
  Eigen::VectorXd alt = Eigen::VectorXd::Zero(p);
  alt[0] = std::clamp(lag_one_autocorrelation(y), -0.9, 0.9);
  if (alt[0] != 0.0) try_start(problem, alt, best);
  return best.fit;
}

FitResult fit_tma_fixed_r(std::span<const double> y, const ModelOrders& orders,
                          double r, const TmaParams& init, const FitOptions& options) {
  init.check_lengths(orders);
  check_fit_input(y, orders.num_params());
  const int p = orders.p, q = orders.q;
  ClsProblem problem(y, p, q, regime_indicator(y, orders.d, r), options);
  const Eigen::VectorXd start = pack(init, p, q);
  BestFit best;
  try_start(problem, start, best);
  for (double sgn : {1.0, -1.0}) {
    Eigen::VectorXd s = start;
    s.tail(q).array() += sgn * options.perturbation;
    try_start(problem, s, best);
  }
  best.fit.params.r = r;
  return best.fit;
}

ThresholdProfile profile_threshold(std::span<const double> y, const ModelOrders& orders,
                                   const ThresholdGrid& grid, const FitResult& null_fit,
                                   const FitOptions& options, SweepDirection direction) {
  orders.validate();
  check_fit_input(y, orders.num_params());
  if (grid.candidates.empty()) throw Error(ErrorKind::DegenerateGrid, "threshold grid is empty");
  if (null_fit.params.phi.size() != static_cast<std::size_t>(orders.p)) {
    throw Error(ErrorKind::InvalidOrders, "null fit order does not match p");
  }
  const int p = orders.p, q = orders.q;
  const std::size_t m = grid.size();

  TmaParams null_start;
  null_start.phi = null_fit.params.phi;
  null_start.psi.assign(q, 0.0);
  const Eigen::VectorXd base = pack(null_start, p, q);

  ThresholdProfile prof;
  prof.per_r.resize(m);
  prof.failed.assign(m, false);

  std::optional<Eigen::VectorXd> warm;
  for (std::size_t step = 0; step < m; ++step) {
    const std::size_t i = direction == SweepDirection::Ascending ? step : m - 1 - step;
    const double r = grid.candidates[i];
    ClsProblem problem(y, p, q, regime_indicator(y, orders.d, r), options);
    BestFit best;
    try_start(problem, base, best);
    for (double sgn : {1.0, -1.0}) {
      Eigen::VectorXd s = base;
      s.tail(q).array() += sgn * options.perturbation;
      try_start(problem, s, best);
    }
    if (warm) try_start(problem, *warm, best);

    best.fit.params.r = r;
    if (!std::isfinite(best.objective) || !std::isfinite(best.fit.sse)) {
      prof.failed[i] = true;
      ++prof.failures;
      warm.reset();
    } else {
      warm = pack(best.fit.params, p, q);
    }
    prof.per_r[i] = std::move(best.fit);
  }

  bool found = false;
  for (std::size_t i = 0; i < m; ++i) {
    if (prof.failed[i]) continue;
    if (!found || prof.per_r[i].sse < prof.per_r[prof.r_hat_index].sse) {
      prof.r_hat_index = i;
      found = true;
    }
  }
  if (!found) throw Error(ErrorKind::Domain, "every threshold candidate failed to fit");
  prof.r_hat = grid.candidates[prof.r_hat_index];
  return prof;
}

ThresholdProfile profile_threshold(std::span<const double> y, const ModelOrders& orders,
                                   const ThresholdGrid& grid, const FitOptions& options) {
  orders.validate();
  const FitResult null_fit = fit_ma(y, orders.p, options);
  return profile_threshold(y, orders, grid, null_fit, options);
}

}  // namespace tma
