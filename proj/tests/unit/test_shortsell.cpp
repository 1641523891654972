#include <gtest/gtest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>

#include "tempertail/errors.hpp"
#include "tempertail/models.hpp"
#include "tempertail/shortsell.hpp"

namespace {

namespace ss = tempertail::shortsell;
namespace m = tempertail::models;
using tempertail::RngState;

// With exponential prices of scale a, L_P(sk) = int_0^inf e^{-y} e^{-a s k y} dy, so
// L_PX(s) = int_0^inf e^{-y} G(e^{-a s y}) dy for the order PGF G.
double lpx_oracle(double s, double a, const std::function<double(double)>& pgf) {
  boost::math::quadrature::exp_sinh<double> rule;
  return rule.integrate([&](double y) { return std::exp(-y) * pgf(std::exp(-a * s * y)); }, 1e-14);
}

double closed_form_oracle(double s, double a, double g) {
  const double x = 1.0 / (a * s);
  return 1.0 - std::exp(std::lgamma(1 + g) + std::lgamma(1 + x) - std::lgamma(1 + g + x));
}

TEST(ShortSell, ClosedFormFromLogGamma) {
  for (double g : {0.2, 0.5, 0.9}) {
    for (double s : {0.01, 1.0, 30.0}) {
      EXPECT_NEAR(ss::lpx_closed_form(s, 1.3, g), closed_form_oracle(s, 1.3, g), 1e-12);
    }
  }
}

TEST(ShortSell, SibuyaSeriesMatchesQuadrature) {
  for (double g : {0.3, 0.7}) {
    for (double s : {0.05, 1.0, 8.0}) {
      const double oracle = lpx_oracle(s, 2.0, [&](double z) { return 1.0 - std::pow(1.0 - z, g); });
      EXPECT_NEAR(ss::analytic_lpx(s, m::Exponential{2.0}, m::Sibuya{g}), oracle, 1e-10) << g << " " << s;
    }
  }
}

TEST(ShortSell, TemperedAndTruncatedSeriesMatchQuadrature) {
  const double g = 0.5, a = 1.0;
  for (double s : {0.1, 1.0}) {
    const double tilt = 0.9;
    const double norm = 1.0 - std::pow(1.0 - tilt, g);
    const double tempered =
        lpx_oracle(s, a, [&](double z) { return (1.0 - std::pow(1.0 - tilt * z, g)) / norm; });
    EXPECT_NEAR(ss::analytic_lpx(s, m::Exponential{a}, m::TemperedSibuya{g, tilt}), tempered, 1e-10);
    const std::int64_t M = 40;
    double mass = 0.0;
    for (int k = 1; k <= M; ++k) mass += m::sibuya_pmf(k, g);
    const double truncated = lpx_oracle(s, a, [&](double z) {
      double sum = 0.0;
      for (int k = 1; k <= M; ++k) sum += m::sibuya_pmf(k, g) * std::pow(z, k);
      return sum / mass;
    });
    EXPECT_NEAR(ss::analytic_lpx(s, m::Exponential{a}, m::TruncSibuya{g, M}), truncated, 1e-10);
  }
}

TEST(ShortSell, CompoundGeometricTransform) {
  const ss::ShortSellConfig cfg{0.3, m::Sibuya{0.5}, m::Exponential{1.0}, 0.0};
  for (double s : {0.1, 1.0, 5.0}) {
    const double lpx = closed_form_oracle(s, 1.0, 0.5);
    const double ls = 0.3 * lpx / (1.0 - 0.7 * lpx);
    EXPECT_NEAR(ss::closed_form_ls(s, cfg), ls, 1e-13);
    EXPECT_NEAR(ss::analytic_ls(s, cfg), ls, 1e-11);
    EXPECT_NEAR(ss::analytic_ls_complement(s, cfg), 1.0 - ls, 1e-11);
  }
}

TEST(ShortSell, TailConstant) {
  const ss::ShortSellConfig cfg{0.5, m::Sibuya{0.5}, m::Exponential{1.0}, 0.0};
  EXPECT_NEAR(*ss::tail_constant(cfg), std::tgamma(1.5) / 0.5, 1e-15);
  EXPECT_NEAR(*ss::tail_constant(cfg), 1.7724538509055159, 1e-15);
  const double s = 1e-8;
  EXPECT_NEAR(ss::closed_form_ls_complement(s, cfg) / std::sqrt(s), 1.7724538509055159, 0.01 * 1.7724538509055159);
  EXPECT_FALSE(ss::tail_constant({0.5, m::TruncSibuya{0.5, 10}, m::Exponential{1.0}, 0.0}).has_value());
}

TEST(ShortSell, ProfitBoundWithZeroThresholdIsRevenue) {
  const ss::ShortSellConfig cfg{0.4, m::Sibuya{0.6}, m::Exponential{1.0}, 0.0};
  const auto revenue = ss::simulate_revenue(cfg, 2'000, RngState{9, 1});
  const auto profit = ss::simulate_profit_bound(cfg, 2'000, RngState{9, 1});
  EXPECT_EQ(revenue.values, profit.values);
  auto priced = cfg;
  priced.threshold = 0.5;
  const auto lower = ss::simulate_profit_bound(priced, 2'000, RngState{9, 1});
  for (std::size_t i = 0; i < lower.values.size(); ++i) ASSERT_LT(lower.values[i], revenue.values[i]);
}

TEST(ShortSell, Validation) {
  EXPECT_THROW(ss::validate({0.0, m::Sibuya{0.5}, m::Exponential{1.0}, 0.0}), tempertail::ValidationError);
  EXPECT_THROW(ss::validate({0.3, m::Geometric{0.5}, m::Exponential{1.0}, 0.0}), tempertail::ValidationError);
  EXPECT_THROW(ss::validate({0.3, m::Sibuya{0.5}, m::Geometric{0.5}, 0.0}), tempertail::ValidationError);
  EXPECT_THROW(ss::validate({0.3, m::Sibuya{0.5}, m::Exponential{1.0}, -1.0}), tempertail::ValidationError);
  EXPECT_THROW(ss::closed_form_ls(1.0, {0.3, m::Sibuya{0.5}, m::Pareto{2.0}, 0.0}), tempertail::ValidationError);
  EXPECT_THROW(ss::tail_report({}, 1000, RngState{}), tempertail::ValidationError);
}

}  // namespace
