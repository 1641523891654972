#include <gtest/gtest.h>

#include <cmath>
#include <json.hpp>
#include <numeric>

#include "tempertail/errors.hpp"
#include "tempertail/estimation.hpp"

namespace {

namespace est = tempertail::estimation;

TEST(Hill, GeometricLadderIsExact) {
  // x_i = e^i: the top k log-spacings average (k+1)/2, so the index is 2/(k+1).
  std::vector<double> x(100);
  for (int i = 0; i < 100; ++i) x[i] = std::exp(static_cast<double>(i));
  const auto h = est::hill(x, 9);
  EXPECT_NEAR(h.index, 0.2, 1e-12);
  EXPECT_EQ(h.k, 9u);
  EXPECT_NEAR(h.std_error, 0.2 / 3.0, 1e-12);
  EXPECT_EQ(est::default_hill_k(100), 10u);
  EXPECT_EQ(est::default_hill_k(1), 1u);
}

TEST(Hill, ParetoQuantiles) {
  const double a = 1.5;
  const std::size_t n = 1'000'000;
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::pow((i + 0.5) / n, -1.0 / a);
  EXPECT_NEAR(est::hill(x).index, a, 0.01);
}

TEST(Hill, RejectsBadInput) {
  EXPECT_THROW(est::hill(std::vector<double>{1.0, -2.0, 3.0}, 1), tempertail::ValidationError);
  EXPECT_THROW(est::hill(std::vector<double>{1.0, 2.0}, 2), tempertail::ValidationError);
}

TEST(Ks, SimpleDistances) {
  auto uniform = [](double x) { return std::clamp(x, 0.0, 1.0); };
  EXPECT_NEAR(est::ks_distance(std::vector<double>{0.5}, uniform), 0.5, 1e-15);
  EXPECT_NEAR(est::ks_distance(std::vector<double>{0.25, 0.75}, uniform), 0.25, 1e-15);
  EXPECT_EQ(est::ks_two_sample(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 3}), 0.0);
  EXPECT_EQ(est::ks_two_sample(std::vector<double>{1, 2}, std::vector<double>{5, 6, 7}), 1.0);
  EXPECT_NEAR(est::ks_two_sample(std::vector<double>{1, 3}, std::vector<double>{2, 4}), 0.5, 1e-15);
}

TEST(Ks, CriticalValues) {
  EXPECT_NEAR(est::ks_coefficient(1e-3), std::sqrt(-std::log(5e-4) / 2.0), 1e-15);
  EXPECT_NEAR(est::ks_coefficient(1e-3), 1.949, 1e-3);
  EXPECT_NEAR(est::ks_critical(1e-3, 10'000), est::ks_coefficient(1e-3) / 100.0, 1e-15);
  EXPECT_NEAR(est::ks_critical_two_sample(1e-3, 100, 100), est::ks_coefficient(1e-3) * std::sqrt(2.0 / 100), 1e-15);
}

TEST(EmpiricalTransform, TwoPointSample) {
  const std::vector<double> x{0.0, 1.0};
  const auto lt = est::empirical_transform(x, tempertail::models::TransformKind::LT, {1.0});
  EXPECT_NEAR(lt.values[0].real(), (1.0 + std::exp(-1.0)) / 2.0, 1e-15);
  const auto cf = est::empirical_transform(x, tempertail::models::TransformKind::CF, {2.0});
  EXPECT_NEAR(cf.values[0].real(), (1.0 + std::cos(2.0)) / 2.0, 1e-15);
  EXPECT_NEAR(cf.values[0].imag(), std::sin(2.0) / 2.0, 1e-15);
  const auto pgf = est::empirical_transform(std::vector<double>{1.0, 3.0}, tempertail::models::TransformKind::PGF,
                                            {0.5});
  EXPECT_NEAR(pgf.values[0].real(), (0.5 + 0.125) / 2.0, 1e-15);
  EXPECT_THROW(est::empirical_transform(x, tempertail::models::TransformKind::PDF, {1.0}), tempertail::ValidationError);
}

TEST(Curvature, PowerAgainstExponential) {
  const std::size_t n = 200'000;
  std::vector<double> pareto(n), expo(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = (i + 0.5) / n;
    pareto[i] = std::pow(u, -1.0);
    expo[i] = -std::log(u);
  }
  const auto p = est::survival_curvature(pareto);
  EXPECT_EQ(p.classification, est::TailClass::PowerLike);
  EXPECT_NEAR(p.slope, -1.0, 0.05);
  EXPECT_EQ(est::survival_curvature(expo).classification, est::TailClass::LighterThanPower);
}

TEST(Report, PassRuleAndJson) {
  auto ok = est::VerificationReport::make("a", 0.5, 1.0);
  EXPECT_TRUE(ok.pass);
  EXPECT_FALSE(est::VerificationReport::make("b", std::nan(""), 1.0).pass);
  ok.with("n", 10.0).with("note", "x\"y");
  const auto parsed = nlohmann::ordered_json::parse(est::to_json(ok));
  std::vector<std::string> keys;
  for (const auto& item : parsed.items()) keys.push_back(item.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"name", "statistic", "tolerance", "pass", "metadata"}));
  EXPECT_EQ(parsed["metadata"]["note"], "x\"y");
  EXPECT_EQ(parsed["metadata"]["n"], "10");
  EXPECT_EQ(est::format_double(0.1), "0.1");
  EXPECT_EQ(est::format_double(std::nan("")), "nan");
  EXPECT_EQ(est::format_double(-INFINITY), "-inf");
}

}  // namespace
