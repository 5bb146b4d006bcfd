#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "tma/error.hpp"
#include "tma/lr_test.hpp"
#include "tma/simulate.hpp"

namespace {

using tma::Distribution;

tma::Series simulate(const tma::ModelOrders& orders, const tma::TmaParams& params,
                     std::size_t n, std::uint64_t seed) {
  return tma::simulate_tma(orders, params, n,
                           {Distribution::StandardNormal, 0.0, 1.0, seed, 0});
}

tma::KernelEstimate one_point_kernel(double k) {
  tma::KernelEstimate est;
  est.grid = {0.0};
  est.p = 1;
  est.q = 1;
  est.K = Eigen::MatrixXd::Constant(1, 1, k);
  return est;
}

const std::vector<double> kFive{0.05};

TEST(Profile, NonnegativeUnderNull) {
  const tma::ModelOrders orders{1, 1, 2};
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto y = simulate(orders, {{0.5}, {0.0}, 0.0}, 300, seed);
    const auto prof = tma::lr_profile(y, orders, tma::threshold_grid(y, 0.1, 0.9, 0));
    double mx = -INFINITY;
    for (double v : prof.values) {
      EXPECT_GE(v, -1e-8);
      mx = std::max(mx, v);
    }
    EXPECT_TRUE(std::isfinite(prof.lr_n));
    EXPECT_EQ(prof.lr_n, mx);
    EXPECT_NEAR(prof.sigma2_null, prof.null_fit.sse / 300.0, 1e-15);
  }
}

TEST(Profile, RequiresEnoughData) {
  const auto y = simulate({1, 1, 2}, {{0.5}, {0.0}, 0.0}, 30, 1);
  EXPECT_THROW(tma::lr_profile(y, {1, 1, 2}, tma::threshold_grid(y, 0.1, 0.9, 0)), tma::Error);
}

TEST(Profile, ScaleInvariant) {
  const tma::ModelOrders orders{1, 1, 2};
  const auto y = simulate(orders, {{0.5}, {-0.3}, 0.0}, 300, 9);
  const auto base = tma::lr_profile(y, orders, tma::threshold_grid(y, 0.1, 0.9, 0));
  for (double c : {0.01, 100.0}) {
    std::vector<double> cy(y);
    for (auto& v : cy) v *= c;
    const auto prof = tma::lr_profile(cy, orders, tma::threshold_grid(cy, 0.1, 0.9, 0));
    EXPECT_NEAR(prof.lr_n, base.lr_n, 1e-6 * base.lr_n);
  }
}

TEST(Kernel, EmptyRegimeGivesZeroBlocks) {
  const tma::ModelOrders orders{1, 1, 2};
  const auto y = simulate(orders, {{0.5}, {0.0}, 0.0}, 500, 3);
  const double below = *std::min_element(y.begin(), y.end()) - 1.0;
  const std::vector<double> phi{0.5}, grid{below, 0.0};
  const auto k = tma::estimate_kernel(y, phi, orders, grid);
  EXPECT_EQ(k.Sigma1_block(0).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(k.Sigma2.row(0).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(k.K_block(0, 0)(0, 0), 0.0);
  EXPECT_GT(k.K_block(1, 1)(0, 0), 0.0);
}

TEST(Kernel, DelayBeyondOrderMatchesBridgeCovariance) {
  // With d > p the threshold score is Sigma * F(r) (1 - F(r)) on the diagonal.
  const tma::ModelOrders orders{1, 1, 2};
  const auto y = simulate(orders, {{0.5}, {0.0}, 0.0}, 5000, 4);
  const auto grid = tma::threshold_grid(y, 0.1, 0.9, 9);
  const std::vector<double> phi{0.5};
  const auto k = tma::estimate_kernel(y, phi, orders, grid.candidates);
  const double sigma = k.Sigma(0, 0);
  EXPECT_NEAR(sigma, 1.0 / (1.0 - 0.25), 0.1);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double F = grid.levels[i];
    EXPECT_NEAR(k.K_block(i, i)(0, 0), sigma * F * (1.0 - F), 0.04);
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double G = grid.levels[j];
      EXPECT_NEAR(k.K_block(i, j)(0, 0), sigma * (std::min(F, G) - F * G), 0.04);
    }
  }
}

TEST(Kernel, SymmetricAndPsd) {
  const tma::ModelOrders orders{2, 2, 1};
  const auto y = simulate(orders, {{0.4, 0.2}, {0.0, 0.0}, 0.0}, 800, 5);
  const auto grid = tma::threshold_grid(y, 0.1, 0.9, 12);
  const std::vector<double> phi{0.4, 0.2};
  const auto k = tma::estimate_kernel(y, phi, orders, grid.candidates);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = 0; j < grid.size(); ++j) {
      EXPECT_EQ(k.K_block(i, j), k.K_block(j, i).transpose());
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k.K_block(i, i));
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10);
  }
  EXPECT_FALSE(k.regularized);
}

TEST(KernelSimulation, OnePointIsChiSquare) {
  const auto cv = tma::simulate_kernel_critical_values(one_point_kernel(2.5), kFive, 100000, 1);
  EXPECT_NEAR(cv.quantiles[0], 3.841, 0.15);
  EXPECT_EQ(cv.method, tma::CriticalMethod::KernelSimulation);
  EXPECT_EQ(cv.replications, 100000u);
}

TEST(KernelSimulation, OnePointTwoDimensional) {
  tma::KernelEstimate est;
  est.grid = {0.0};
  est.p = 2;
  est.q = 2;
  est.K.resize(2, 2);
  est.K << 2.0, 0.7, 0.7, 1.0;
  const auto cv = tma::simulate_kernel_critical_values(est, kFive, 100000, 2);
  EXPECT_NEAR(cv.quantiles[0], 5.991, 0.2);
}

TEST(KernelSimulation, DeterministicAndThreadIndependent) {
  const tma::ModelOrders orders{1, 1, 1};
  const auto y = simulate(orders, {{0.5}, {0.0}, 0.0}, 400, 6);
  const auto grid = tma::threshold_grid(y, 0.1, 0.9, 20);
  const std::vector<double> phi{0.5};
  const auto k = tma::estimate_kernel(y, phi, orders, grid.candidates);
  const std::vector<double> alphas{0.10, 0.05, 0.01};
  const auto a = tma::simulate_kernel_critical_values(k, alphas, 5000, 7, 1);
  const auto b = tma::simulate_kernel_critical_values(k, alphas, 5000, 7, 1);
  const auto c = tma::simulate_kernel_critical_values(k, alphas, 5000, 7, 3);
  EXPECT_EQ(a.quantiles, b.quantiles);
  EXPECT_EQ(a.draws, c.draws);
  EXPECT_LT(a.quantiles[0], a.quantiles[1]);
  EXPECT_LT(a.quantiles[1], a.quantiles[2]);
}

TEST(KernelSimulation, RejectsTooFewReplications) {
  EXPECT_THROW(tma::simulate_kernel_critical_values(one_point_kernel(1.0), kFive, 999, 0),
               tma::Error);
  try {
    tma::simulate_kernel_critical_values(one_point_kernel(0.0), kFive, 1000, 0);
    FAIL();
  } catch (const tma::Error& e) {
    EXPECT_EQ(e.kind(), tma::ErrorKind::KernelDegenerate);
  }
}

TEST(Bridge, SinglePointReductions) {
  const auto one = tma::brownian_bridge_critical_values(1, 0.5 - 1e-9, 0.5 + 1e-9, 1, 100000, 3);
  const auto two = tma::brownian_bridge_critical_values(2, 0.5 - 1e-9, 0.5 + 1e-9, 1, 100000, 4);
  ASSERT_EQ(one.alphas, (std::vector<double>{0.10, 0.05, 0.01}));
  EXPECT_NEAR(one.quantiles[1], 3.841, 0.15);
  EXPECT_NEAR(two.quantiles[1], 5.991, 0.15);
  EXPECT_EQ(one.method, tma::CriticalMethod::BrownianBridge);
}

TEST(Bridge, QuantilesIncreaseWithGrid) {
  const auto coarse = tma::brownian_bridge_critical_values(1, 0.1, 0.9, 20, 20000, 5);
  const auto fine = tma::brownian_bridge_critical_values(1, 0.1, 0.9, 200, 20000, 5);
  EXPECT_LT(coarse.quantiles[1], fine.quantiles[1]);
  EXPECT_LT(fine.quantiles[0], fine.quantiles[1]);
  EXPECT_LT(fine.quantiles[1], fine.quantiles[2]);
}

TEST(Bridge, Validation) {
  EXPECT_THROW(tma::brownian_bridge_critical_values(1, 0.9, 0.1, 10, 1000, 0), tma::Error);
  const std::vector<double> bad{0.5, 0.4};
  EXPECT_THROW(tma::brownian_bridge_critical_values(1, bad, kFive, 1000, 0), tma::Error);
}

TEST(Quantile, OrderStatistic) {
  std::vector<double> d(100);
  for (int i = 0; i < 100; ++i) d[i] = i + 1;
  EXPECT_EQ(tma::upper_quantile(d, 0.05), 95.0);
  EXPECT_EQ(tma::upper_quantile(d, 0.10), 90.0);
  EXPECT_EQ(tma::upper_quantile(d, 0.015), 99.0);
}

TEST(PValue, MonotoneAndConsistentWithRejection) {
  const auto cv = tma::simulate_kernel_critical_values(one_point_kernel(1.0),
                                                       std::vector<double>{0.10, 0.05, 0.01},
                                                       4000, 8);
  double prev = 1.0;
  for (double s = 0.0; s < 12.0; s += 0.05) {
    const double pv = cv.p_value(s);
    EXPECT_GE(pv, 0.0);
    EXPECT_LE(pv, prev);
    prev = pv;
    for (std::size_t a = 0; a < cv.alphas.size(); ++a) {
      EXPECT_EQ(s > cv.quantiles[a], pv <= cv.alphas[a]) << s << " " << cv.alphas[a];
    }
  }
  for (double q : cv.quantiles) {
    for (std::size_t a = 0; a < cv.alphas.size(); ++a) {
      EXPECT_EQ(q > cv.quantiles[a], cv.p_value(q) <= cv.alphas[a]);
    }
  }
}

TEST(RunTest, MethodSelection) {
  EXPECT_EQ(tma::select_method({1, 1, 2}), tma::CriticalMethod::BrownianBridge);
  EXPECT_EQ(tma::select_method({2, 2, 3}), tma::CriticalMethod::BrownianBridge);
  EXPECT_EQ(tma::select_method({1, 1, 1}), tma::CriticalMethod::KernelSimulation);
  EXPECT_EQ(tma::select_method({2, 1, 3}), tma::CriticalMethod::KernelSimulation);
  EXPECT_EQ(tma::to_string(tma::CriticalMethod::BrownianBridge), "brownian-bridge-special-case");
  EXPECT_EQ(tma::to_string(tma::CriticalMethod::KernelSimulation), "kernel-simulation");
}

TEST(RunTest, ScaleInvariantDecisions) {
  for (const tma::ModelOrders orders : {tma::ModelOrders{1, 1, 2}, tma::ModelOrders{1, 1, 1}}) {
    const auto y = simulate(orders, {{0.5}, {-0.3}, 0.0}, 300, 10);
    tma::TestConfig cfg;
    cfg.replications = 5000;
    const auto base = tma::run_test(y, orders, 0.1, 0.9, cfg);
    for (double c : {0.01, 100.0}) {
      std::vector<double> cy(y);
      for (auto& v : cy) v *= c;
      const auto res = tma::run_test(cy, orders, 0.1, 0.9, cfg);
      EXPECT_NEAR(res.profile.lr_n, base.profile.lr_n, 1e-6 * base.profile.lr_n);
      EXPECT_EQ(res.reject, base.reject);
      EXPECT_EQ(res.critical.method, base.critical.method);
    }
  }
}

TEST(RunTest, PValueMatchesDecisions) {
  const tma::ModelOrders orders{1, 1, 1};
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto y = simulate(orders, {{0.5}, {-0.4}, 0.0}, 300, 20 + seed);
    tma::TestConfig cfg;
    cfg.replications = 3000;
    const auto res = tma::run_test(y, orders, 0.1, 0.9, cfg);
    EXPECT_LE(res.profile.grid.size(), tma::kKernelGridCap);
    for (std::size_t a = 0; a < cfg.alphas.size(); ++a) {
      EXPECT_EQ(res.reject[a], res.p_value <= cfg.alphas[a]);
    }
  }
}

TEST(RunTest, StrongAlternativeRejects) {
  const tma::ModelOrders orders{1, 1, 2};
  int rejections = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto y = simulate(orders, {{0.5}, {0.5}, 0.0}, 400, 100 + seed);
    tma::TestConfig cfg;
    cfg.replications = 5000;
    cfg.alphas = {0.05};
    rejections += tma::run_test(y, orders, 0.1, 0.9, cfg).reject[0];
  }
  EXPECT_GE(rejections, 19);
}

TEST(RunTest, Deterministic) {
  const tma::ModelOrders orders{1, 1, 2};
  const auto y = simulate(orders, {{0.5}, {0.0}, 0.0}, 300, 11);
  tma::TestConfig cfg;
  cfg.replications = 5000;
  cfg.seed = 99;
  const auto a = tma::run_test(y, orders, 0.1, 0.9, cfg);
  const auto b = tma::run_test(y, orders, 0.1, 0.9, cfg);
  EXPECT_EQ(a.critical.quantiles, b.critical.quantiles);
  EXPECT_EQ(a.p_value, b.p_value);
  EXPECT_EQ(a.profile.values, b.profile.values);
}

}  // namespace
