#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "tma/diagnostics.hpp"
#include "tma/error.hpp"
#include "tma/estimate.hpp"
#include "tma/residuals.hpp"
#include "tma/simulate.hpp"

namespace {

using tma::Distribution;

TEST(Acf, AlternatingSeries) {
  std::vector<double> x(1000);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = i % 2 ? -1.0 : 1.0;
  const auto rho = tma::acf(x, 3);
  ASSERT_EQ(rho.size(), 4u);
  EXPECT_EQ(rho[0], 1.0);
  EXPECT_NEAR(rho[1], -1.0, 2.0 / 1000);
  EXPECT_NEAR(rho[2], 1.0, 3.0 / 1000);
}

TEST(Acf, WhiteNoiseInsideBartlettBand) {
  const auto x = tma::gen_innovations({Distribution::StandardNormal, 0.0, 1.0, 5, 0}, 5000);
  const auto rho = tma::acf(x, 10);
  for (std::size_t k = 1; k <= 10; ++k) EXPECT_LE(std::abs(rho[k]), 4.0 / std::sqrt(5000.0));
}

TEST(Acf, Errors) {
  const std::vector<double> flat(20, 2.0);
  try {
    tma::acf(flat, 2);
    FAIL();
  } catch (const tma::Error& e) {
    EXPECT_EQ(e.kind(), tma::ErrorKind::UndefinedAcf);
  }
  const std::vector<double> shortx{1.0, 2.0, 3.0};
  EXPECT_THROW(tma::acf(shortx, 3), tma::Error);
}

TEST(ChiSquare, ReferenceQuantiles) {
  EXPECT_NEAR(tma::chi_square_upper_quantile(0.05, 11), 19.68, 0.005);
  // A commonly quoted 23.36 for df = 13 is a misprint; the exact quantile is 22.362.
  EXPECT_NEAR(tma::chi_square_upper_quantile(0.05, 13), 22.362, 0.005);
  EXPECT_NEAR(tma::chi_square_upper_quantile(0.05, 15), 25.00, 0.005);
  EXPECT_NEAR(tma::chi_square_upper_tail(3.841458820694124, 1), 0.05, 1e-12);
}

TEST(LjungBox, ZeroAutocorrelationGivesZero) {
  std::vector<double> x(40, 0.0);
  x.front() = 1.0;
  x.back() = -1.0;
  const auto lb = tma::ljung_box(x, 15, 0);
  EXPECT_EQ(lb.Q, 0.0);
  EXPECT_EQ(lb.df, 15u);
  EXPECT_EQ(lb.p_value, 1.0);
}

TEST(LjungBox, HandValue) {
  const std::vector<double> x{1, 2, 3, 4, 5, 6};
  const auto rho = tma::acf(x, 2);
  const double n = 6.0;
  const double q = n * (n + 2) * (rho[1] * rho[1] / (n - 1) + rho[2] * rho[2] / (n - 2));
  const auto lb = tma::ljung_box(x, 2, 1);
  EXPECT_NEAR(lb.Q, q, 1e-12);
  EXPECT_EQ(lb.df, 1u);
  EXPECT_NEAR(lb.p_value, tma::chi_square_upper_tail(q, 1), 1e-14);
}

TEST(LjungBox, InvariantToScaleAndShift) {
  const auto x = tma::gen_innovations({Distribution::StandardNormal, 0.0, 1.0, 6, 0}, 300);
  std::vector<double> y(x);
  for (auto& v : y) v = 3.5 * v - 12.0;
  EXPECT_NEAR(tma::ljung_box(x, 11, 1).Q, tma::ljung_box(y, 11, 1).Q, 1e-10);
}

TEST(LjungBox, InvalidDf) {
  const auto x = tma::gen_innovations({Distribution::StandardNormal, 0.0, 1.0, 6, 0}, 300);
  try {
    tma::ljung_box(x, 2, 2);
    FAIL();
  } catch (const tma::Error& e) {
    EXPECT_EQ(e.kind(), tma::ErrorKind::InvalidDf);
  }
}

TEST(LjungBox, NullCalibration) {
  const int reps = 500;
  int rejections = 0;
  for (int k = 0; k < reps; ++k) {
    const auto y = tma::simulate_tma({1, 1, 1}, {{0.5}, {0.0}, 0.0}, 2000,
                                     {Distribution::StandardNormal, 0.0, 1.0, 2024,
                                      static_cast<std::uint64_t>(k)});
    const auto fit = tma::fit_ma(y, 1);
    const auto res = tma::residuals_ma(y, fit.params.phi);
    rejections += tma::ljung_box(res.eps, 15, 1).p_value < 0.05;
  }
  EXPECT_NEAR(static_cast<double>(rejections) / reps, 0.05, 0.03);
}

TEST(Aic, Examples) {
  EXPECT_DOUBLE_EQ(tma::aic(100, 100.0, 1), 2.0);
  EXPECT_NEAR(tma::aic(100, 200.0, 1) - tma::aic(100, 100.0, 1), 100 * std::log(2.0), 1e-12);
  EXPECT_NEAR(tma::aic(250, 80.0, 3) - tma::aic(250, 95.0, 1),
              250 * std::log(80.0 / 95.0) + 4.0, 1e-12);
  EXPECT_THROW(tma::aic(100, 0.0, 1), tma::Error);
}

TEST(Aic, PrefersThresholdModelOnThresholdData) {
  const tma::ModelOrders orders{1, 1, 1};
  const int reps = 200;
  int wins = 0;
  for (int k = 0; k < reps; ++k) {
    const auto y = tma::simulate_tma(orders, {{0.5}, {-0.5}, 0.0}, 1000,
                                     {Distribution::StandardNormal, 0.0, 1.0, 77,
                                      static_cast<std::uint64_t>(k)});
    const auto ma = tma::fit_ma(y, 1);
    const auto grid = tma::threshold_grid(y, 0.1, 0.9, 30);
    const auto prof = tma::profile_threshold(y, orders, grid, ma);
    const double tma_sse = prof.per_r[prof.r_hat_index].sse;
    wins += tma::aic(y.size(), tma_sse, 2) < tma::aic(y.size(), ma.sse, 1);
  }
  EXPECT_GE(wins, 180);
}

}  // namespace
