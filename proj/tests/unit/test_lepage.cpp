#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "tempertail/errors.hpp"
#include "tempertail/lepage.hpp"

namespace {

namespace lp = tempertail::lepage;
namespace m = tempertail::models;
using tempertail::Rng;
using tempertail::RngState;
using tempertail::ValidationError;

TEST(LePage, ValidationRules) {
  EXPECT_THROW(lp::validate({2.0, lp::ConstantMultiplier{1.0}, 10}), ValidationError);
  EXPECT_THROW(lp::validate({0.5, lp::ConstantMultiplier{1.0}, 0}), ValidationError);
  EXPECT_THROW(lp::validate({1.5, lp::ConstantMultiplier{1.0}, 10}), ValidationError);
  EXPECT_NO_THROW(lp::validate({1.5, lp::RademacherMultiplier{1.0}, 10}));
  // Pareto(0.4) has no moment of order above 0.5.
  EXPECT_THROW(lp::validate({0.5, m::ModelSpec(m::Pareto{0.4}), 10}), ValidationError);
  EXPECT_THROW(lp::validate({0.3, lp::ConstantMultiplier{1.0}, 10, lp::Scenario::Newton}), ValidationError);
  EXPECT_THROW(lp::validate({0.5, lp::RademacherMultiplier{1.0}, 10, lp::Scenario::Newton}), ValidationError);
}

TEST(LePage, ScenarioVocabulary) {
  for (auto s : {lp::Scenario::Generic, lp::Scenario::Coulomb, lp::Scenario::Newton, lp::Scenario::BaseStation}) {
    EXPECT_EQ(lp::parse_scenario(lp::to_string(s)), s);
  }
  EXPECT_THROW(lp::parse_scenario("gravity"), ValidationError);
  EXPECT_EQ(lp::scenario_alpha(lp::Scenario::Newton), 0.5);
  EXPECT_NEAR(*lp::scenario_alpha(lp::Scenario::BaseStation), 1.0 / 2.6, 1e-15);
  EXPECT_FALSE(lp::scenario_alpha(lp::Scenario::Generic).has_value());
}

TEST(LePage, ResidualBounds) {
  // alpha = 1/2, unit constant: E|X| N^{1-2} / (2 - 1) = 1/N.
  EXPECT_NEAR(lp::residual_bound({0.5, lp::ConstantMultiplier{1.0}, 10'000}), 1e-4, 1e-18);
  // alpha = 3/2, +-1: sqrt(N^{1-4/3} / (4/3 - 1)).
  const double N = 1000;
  EXPECT_NEAR(lp::residual_bound({1.5, lp::RademacherMultiplier{1.0}, 1000}),
              std::sqrt(std::pow(N, 1.0 - 4.0 / 3.0) / (4.0 / 3.0 - 1.0)), 1e-14);
}

TEST(LePage, StableScale) {
  EXPECT_NEAR(*lp::stable_scale({0.5, lp::ConstantMultiplier{1.0}, 10}), std::sqrt(std::numbers::pi), 1e-15);
  // Exponential(1) multiplier: E X^alpha = Gamma(1 + alpha).
  EXPECT_NEAR(*lp::stable_scale({0.3, m::ModelSpec(m::Exponential{1.0}), 10}), std::tgamma(0.7) * std::tgamma(1.3),
              1e-14);
}

TEST(LePage, PathEndsAtTheFullDraw) {
  const lp::LePageConfig cfg{0.5, lp::ConstantMultiplier{1.0}, 500};
  Rng a(3, 1), b(3, 1);
  const auto path = lp::lepage_path(cfg, {10, 100, 500}, a);
  const auto draw = lp::simulate_lepage(cfg, b);
  ASSERT_EQ(path.size(), 3u);
  EXPECT_EQ(path.back(), draw.value);
  EXPECT_LT(path[0], path[1]);
  EXPECT_LT(path[1], path[2]);
  EXPECT_THROW(lp::lepage_path(cfg, {10, 5}, a), ValidationError);
  EXPECT_THROW(lp::lepage_path(cfg, {501}, a), ValidationError);
}

TEST(LePage, FirstTermDominatesSmallAlpha) {
  // With one term and a unit multiplier the draw is Gamma_1^{-1/alpha}, E_1 exponential.
  const lp::LePageConfig cfg{0.5, lp::ConstantMultiplier{1.0}, 1};
  const auto batch = lp::simulate_batch(cfg, 50'000, RngState{2, 2});
  double below = 0.0;
  for (double x : batch.values) below += x <= 4.0 ? 1.0 : 0.0;
  // P{E^{-2} <= 4} = P{E >= 1/2} = e^{-1/2}.
  const double p = std::exp(-0.5);
  EXPECT_NEAR(below / 50'000, p, 4.0 * std::sqrt(p * (1 - p) / 50'000));
  EXPECT_EQ(batch.metadata.at("terms"), "1");
}

TEST(LePage, CoulombDrawsAreSymmetric) {
  const auto batch = lp::scenario_force(lp::Scenario::Coulomb, lp::default_multiplier(lp::Scenario::Coulomb), 4'000,
                                        RngState{1, 1}, 200);
  double positive = 0.0;
  for (double x : batch.values) positive += x > 0 ? 1.0 : 0.0;
  EXPECT_NEAR(positive / 4'000, 0.5, 4.0 * 0.5 / std::sqrt(4'000.0));
}

}  // namespace
