#include <gtest/gtest.h>

#include <cmath>

#include "tempertail/errors.hpp"
#include "tempertail/products.hpp"

namespace {

namespace pr = tempertail::products;
namespace m = tempertail::models;
using tempertail::RngState;

TEST(Products, LogMeans) {
  EXPECT_DOUBLE_EQ(pr::log_mean(pr::LogNormal{0.7, 2.0}), 0.7);
  EXPECT_DOUBLE_EQ(pr::log_mean(pr::Degenerate{std::exp(1.5)}), 1.5);
  // E log X = 1/a for Pareto(a), log(a) - Euler gamma for Exponential(a).
  EXPECT_NEAR(pr::log_mean(m::ModelSpec(m::Pareto{2.0})), 0.5, 1e-15);
  EXPECT_NEAR(pr::log_mean(m::ModelSpec(m::Exponential{3.0})), std::log(3.0) - 0.57721566490153286, 1e-14);
  EXPECT_THROW(pr::log_mean(m::ModelSpec(m::Sibuya{0.5})), tempertail::ValidationError);
}

TEST(Products, DegenerateMultiplierCountsTheGeometric) {
  // X = e gives log Z = p nu exactly.
  const pr::ProductConfig cfg{pr::Degenerate{std::exp(1.0)}, 0.25, pr::GeometricCount{}};
  const auto batch = pr::simulate_zp(cfg, 40'000, RngState{3, 3});
  double ones = 0.0;
  for (double z : batch.values) {
    const double nu = std::log(z) / 0.25;
    ASSERT_NEAR(nu, std::round(nu), 1e-9);
    ASSERT_GE(std::round(nu), 1.0);
    ones += std::round(nu) == 1.0 ? 1.0 : 0.0;
  }
  EXPECT_NEAR(ones / 40'000, 0.25, 4.0 * std::sqrt(0.25 * 0.75 / 40'000));
}

TEST(Products, TruncatedCountStaysBelowBound) {
  const pr::ProductConfig cfg{pr::Degenerate{std::exp(1.0)}, 0.1, pr::TruncGeometricCount{3}};
  const auto batch = pr::trunc_count_products(cfg, 5'000, RngState{4, 4});
  for (double z : batch.values) ASSERT_LE(std::log(z) / 0.1, 3.0 + 1e-9);
}

TEST(Products, ValidationAndLimitCheck) {
  EXPECT_THROW(pr::validate({pr::LogNormal{}, 0.0, pr::GeometricCount{}}), tempertail::ValidationError);
  EXPECT_THROW(pr::validate({pr::LogNormal{}, 0.5, pr::TruncGeometricCount{0}}), tempertail::ValidationError);
  EXPECT_THROW(pr::check_pareto_limit({pr::LogNormal{-1.0, 1.0}, 0.01, pr::GeometricCount{}}, 1000, RngState{}),
               tempertail::ValidationError);
  // Pareto(1) multipliers at small p: Z_p is close to Pareto with index 1.
  const auto report =
      pr::check_pareto_limit({m::ModelSpec(m::Pareto{1.0}), 0.01, pr::GeometricCount{}}, 20'000, RngState{5, 5});
  EXPECT_TRUE(report.pass) << report.statistic;
  EXPECT_FALSE(report.get("mass_below_one").empty());
}

}  // namespace
