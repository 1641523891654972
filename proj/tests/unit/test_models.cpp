#include <gtest/gtest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <complex>
#include <numbers>

#include "tempertail/errors.hpp"
#include "tempertail/models.hpp"

namespace {

namespace m = tempertail::models;
using tempertail::UnsupportedTransform;
using tempertail::ValidationError;

double half_line(const std::function<double(double)>& f) {
  boost::math::quadrature::exp_sinh<double> rule;
  return rule.integrate(f, 1e-13);
}

double catalan(int n) {
  double c = 1.0;
  for (int i = 0; i < n; ++i) c = c * 2.0 * (2.0 * i + 1.0) / (i + 2.0);
  return c;
}

TEST(ModelSpec, RejectsOutOfRange) {
  EXPECT_THROW(m::ModelSpec(m::Sibuya{1.5}), ValidationError);
  EXPECT_THROW(m::ModelSpec(m::Sibuya{0.0}), ValidationError);
  EXPECT_THROW(m::ModelSpec(m::Levy{0.0}), ValidationError);
  EXPECT_THROW(m::ModelSpec(m::PositiveStable{1.0, 1.0}), ValidationError);
  EXPECT_THROW(m::ModelSpec(m::TruncWalkFpt{1}), ValidationError);
  EXPECT_THROW(m::ModelSpec(m::Geometric{1.0}), ValidationError);
  EXPECT_THROW(m::ModelSpec(m::TruncGeometric{0.5, 1}), ValidationError);
  EXPECT_THROW(m::ModelSpec(m::BiasedWalkFpt{0.5}), ValidationError);
  EXPECT_THROW(m::ModelSpec(m::Cts{1, 1, 1, 1, 1.0, 0}), ValidationError);
  EXPECT_THROW(m::ModelSpec(m::TemperedSibuya{0.5, 0.0}), ValidationError);
  EXPECT_NO_THROW(m::ModelSpec(m::Sibuya{1.0}));
}

TEST(ModelSpec, NamesAndDescribe) {
  EXPECT_EQ(m::model_names().size(), std::variant_size_v<m::Params>);
  const m::ModelSpec s = m::Sibuya{0.5};
  EXPECT_EQ(s.name(), "sibuya");
  EXPECT_EQ(s.describe(), "sibuya(gamma=0.5)");
  EXPECT_TRUE(s.is_discrete());
  EXPECT_TRUE(m::ModelSpec(m::Levy{}).is_positive());
  EXPECT_FALSE(m::ModelSpec(m::SubGaussian{}).is_positive());
}

TEST(Evaluate, DispatchAndErrors) {
  const m::ModelSpec pareto = m::Pareto{2.0};
  EXPECT_THROW(m::evaluate(pareto, m::TransformQuery(m::TransformKind::CF, {1.0})), UnsupportedTransform);
  EXPECT_THROW(m::evaluate(m::Sibuya{0.5}, m::TransformQuery(m::TransformKind::PGF, {1.5})), ValidationError);
  EXPECT_THROW(m::TransformQuery(m::TransformKind::CF, {}), ValidationError);
  const auto r = m::evaluate(m::Levy{1.0}, m::TransformQuery(m::TransformKind::CF, {0.0, 1.0}));
  EXPECT_EQ(r.values[0], std::complex<double>(1.0, 0.0));
  EXPECT_EQ(r.values[1], m::levy_cf(1.0, 1.0));
}

TEST(Levy, LaplaceTransformByQuadrature) {
  for (double sigma : {0.5, 2.0}) {
    for (double s : {0.3, 1.0, 4.0}) {
      const double oracle = half_line([&](double x) { return std::exp(-s * x) * m::levy_pdf(x, sigma); });
      EXPECT_NEAR(m::levy_lt(s, sigma), oracle, 1e-10);
    }
  }
}

TEST(Levy, CharacteristicFunctionByFourierQuadrature) {
  boost::math::quadrature::ooura_fourier_cos<double> cos_rule;
  boost::math::quadrature::ooura_fourier_sin<double> sin_rule;
  const double sigma = 1.0;
  auto pdf = [&](double x) { return x > 0 ? m::levy_pdf(x, sigma) : 0.0; };
  for (double t : {0.5, 2.0}) {
    const double re = cos_rule.integrate(pdf, t).first;
    const double im = sin_rule.integrate(pdf, t).first;
    const auto cf = m::levy_cf(t, sigma);
    EXPECT_NEAR(cf.real(), re, 1e-7);
    EXPECT_NEAR(cf.imag(), im, 1e-7);
  }
}

TEST(Levy, CdfIntegratesDensity) {
  boost::math::quadrature::tanh_sinh<double> rule;
  for (double x : {0.2, 1.0, 7.0}) {
    const double oracle = rule.integrate([](double y) { return m::levy_pdf(y, 1.3); }, 0.0, x);
    EXPECT_NEAR(m::levy_cdf(x, 1.3), oracle, 1e-12);
  }
}

TEST(InverseGaussian, DensityIsTiltedLevy) {
  // Expanding the IG exponent: p_IG = p_L e^{sigma/mu} e^{-sigma x / (2 mu^2)} with lambda = sigma.
  const double sigma = 1.7, mu = 0.8;
  for (double x : {0.05, 0.5, 1.0, 3.0, 10.0}) {
    const double oracle = m::levy_pdf(x, sigma) * std::exp(sigma / mu) * std::exp(-sigma * x / (2 * mu * mu));
    EXPECT_NEAR(m::ig_pdf(x, sigma, mu), oracle, 1e-13 * oracle);
  }
}

TEST(InverseGaussian, TransformsByQuadrature) {
  const double lambda = 2.0, mu = 1.5;
  EXPECT_NEAR(half_line([&](double x) { return m::ig_pdf(x, lambda, mu); }), 1.0, 1e-11);
  EXPECT_NEAR(half_line([&](double x) { return x * m::ig_pdf(x, lambda, mu); }), mu, 1e-10);
  for (double s : {0.2, 1.0, 5.0}) {
    const double oracle = half_line([&](double x) { return std::exp(-s * x) * m::ig_pdf(x, lambda, mu); });
    EXPECT_NEAR(m::ig_lt(s, lambda, mu), oracle, 1e-10);
  }
  boost::math::quadrature::tanh_sinh<double> rule;
  const double cdf = rule.integrate([&](double y) { return m::ig_pdf(y, lambda, mu); }, 0.0, 2.0);
  EXPECT_NEAR(m::ig_cdf(2.0, lambda, mu), cdf, 1e-11);
}

TEST(PositiveStable, HalfIsLevy) {
  // exp(-A sqrt(s)) = exp(-sqrt(2 sigma s)) with sigma = A^2 / 2.
  const double A = 1.3, sigma = A * A / 2;
  for (double x : {0.1, 0.7, 2.0, 30.0}) {
    EXPECT_NEAR(m::positive_stable_cdf(x, 0.5, A), m::levy_cdf(x, sigma), 1e-10);
  }
  for (double s : {0.1, 1.0, 9.0}) EXPECT_NEAR(m::positive_stable_lt(s, 0.5, A), m::levy_lt(s, sigma), 1e-15);
}

TEST(PositiveStable, TemperedLaplaceTransform) {
  const double alpha = 0.7, A = 1.2, a = 0.4;
  for (double s : {0.0, 0.5, 3.0}) {
    const double expected = std::exp(-A * (std::pow(s + a, alpha) - std::pow(a, alpha)));
    EXPECT_NEAR(m::tempered_positive_stable_lt(s, alpha, A, a), expected, 1e-15);
  }
  EXPECT_EQ(m::tempered_positive_stable_lt(2.0, alpha, A, 0.0), m::positive_stable_lt(2.0, alpha, A));
}

TEST(SubGaussian, MixtureLaplaceForm) {
  // E exp(-t^2 A / 2) with L(s) = exp(-s^alpha).
  for (double t : {0.0, 0.4, 1.0, 3.0}) {
    const double u = t * t / 2;
    EXPECT_NEAR(m::subgaussian_cf(t, 0.6), std::exp(-std::pow(u, 0.6)), 1e-15);
    EXPECT_NEAR(m::tempered_subgaussian_cf(t, 0.6, 0.5),
                std::exp(-(std::pow(u + 0.5, 0.6) - std::pow(0.5, 0.6))), 1e-15);
    EXPECT_NEAR(m::tempered_stable_mix_cf(t, 0.6, 1.5, 0.0), m::subgaussian_cf(t, 0.6), 1e-14);
  }
}

TEST(TruncSubGaussian, HalfStableOracle) {
  // A is Levy with sigma = 1/2: E e^{-u min(A,M)} = int_0^M e^{-ux} p(x) dx + e^{-uM} P{A > M}.
  boost::math::quadrature::tanh_sinh<double> rule;
  for (double M : {0.2, 1.0, 6.0}) {
    for (double t : {0.3, 1.0, 2.5}) {
      const double u = t * t / 2;
      const double body = rule.integrate([&](double x) { return std::exp(-u * x) * m::levy_pdf(x, 0.5); }, 0.0, M);
      const double oracle = body + std::exp(-u * M) * (1.0 - m::levy_cdf(M, 0.5));
      EXPECT_NEAR(m::trunc_subgaussian_cf(t, 0.5, M), oracle, 1e-9) << "M=" << M << " t=" << t;
    }
  }
}

TEST(Cts, SymmetricIsRealAndVarianceMatches) {
  const m::Cts p{1.0, 1.0, 2.0, 2.0, 0.5, 0.0};
  for (double u : {0.3, 1.0, 4.0}) {
    const auto plus = m::cts_cf(u, p), minus = m::cts_cf(-u, p);
    EXPECT_NEAR(plus.real(), minus.real(), 1e-15);
    EXPECT_NEAR(plus.imag(), -minus.imag(), 1e-15);
    EXPECT_NEAR(plus.imag(), 0.0, 1e-15);
  }
  // Var = Gamma(2-alpha) (C1 l+^{alpha-2} + C2 l-^{alpha-2}) from -d^2/du^2 log phi at 0.
  const m::Cts q{1.0, 0.5, 1.5, 3.0, 0.6, 0.2};
  const double h = 1e-3;
  const double second = (std::log(m::cts_cf(h, q)) - 2.0 * std::log(m::cts_cf(0.0, q)) +
                         std::log(m::cts_cf(-h, q))).real() / (h * h);
  const double variance = std::tgamma(2 - 0.6) * (std::pow(1.5, 0.6 - 2) + 0.5 * std::pow(3.0, 0.6 - 2));
  EXPECT_NEAR(-second, variance, 1e-5);
}

TEST(Walk, FirstPassageIsCatalan) {
  // P{T = 2n-1} = Catalan(n-1) / 2^{2n-1}.
  for (int n = 1; n <= 30; ++n) {
    const double expected = catalan(n - 1) / std::ldexp(1.0, 2 * n - 1);
    ASSERT_NEAR(m::walk_fpt_pmf(2 * n - 1), expected, 1e-15 * expected) << n;
    ASSERT_EQ(m::walk_fpt_pmf(2 * n), 0.0);
  }
  for (double z : {0.2, 0.9}) EXPECT_NEAR(m::walk_fpt_pgf(z), (1.0 - std::sqrt(1.0 - z * z)) / z, 1e-15);
}

TEST(Walk, BiasedPathCounting) {
  const double p = 0.7;
  for (int n = 1; n <= 20; ++n) {
    const double expected = catalan(n - 1) * std::pow(p, n) * std::pow(1.0 - p, n - 1);
    ASSERT_NEAR(m::biased_walk_fpt_pmf(2 * n - 1, p), expected, 1e-14 * expected);
  }
  for (double z : {0.3, 0.8}) {
    const double oracle = (1.0 - std::sqrt(1.0 - 4.0 * p * (1.0 - p) * z * z)) / (2.0 * (1.0 - p) * z);
    EXPECT_NEAR(m::biased_walk_fpt_pgf(z, p), oracle, 1e-15);
  }
  EXPECT_NEAR(std::abs(m::biased_walk_fpt_cf(0.0, p)), 1.0, 1e-15);
}

TEST(Walk, TruncatedLumpsTail) {
  const std::int64_t budget = 9;  // last affordable odd time is 7
  double lower = 0.0;
  for (int k = 1; k < 7; k += 2) {
    EXPECT_DOUBLE_EQ(m::truncated_walk_pmf(k, budget), m::walk_fpt_pmf(k));
    lower += m::walk_fpt_pmf(k);
  }
  EXPECT_NEAR(m::truncated_walk_pmf(7, budget), 1.0 - lower, 1e-15);
  EXPECT_EQ(m::truncated_walk_pmf(9, budget), 0.0);
}

TEST(SibuyaFamily, GeneratingFunctions) {
  const double g = 0.35;
  for (double z : {0.0, 0.5, 0.99}) EXPECT_NEAR(m::sibuya_pgf(z, g), 1.0 - std::pow(1.0 - z, g), 1e-15);
  // Truncated: finite sum of the conditioned pmf.
  const std::int64_t M = 25;
  double mass = 0.0;
  for (int k = 1; k <= M; ++k) mass += m::sibuya_pmf(k, g);
  double sum = 0.0;
  for (int k = 1; k <= M; ++k) sum += m::sibuya_pmf(k, g) / mass * std::pow(0.6, k);
  EXPECT_NEAR(m::trunc_sibuya_pgf(0.6, g, M), sum, 1e-14);
  EXPECT_NEAR(m::trunc_sibuya_pmf(3, g, M), m::sibuya_pmf(3, g) / mass, 1e-15);
  // Tempered: coefficients of (1-(1-az)^g)/(1-(1-a)^g).
  const double a = 0.4;
  const double norm = 1.0 - std::pow(1.0 - a, g);
  EXPECT_NEAR(m::tempered_sibuya_pgf(0.7, g, a), (1.0 - std::pow(1.0 - a * 0.7, g)) / norm, 1e-15);
  for (int k : {1, 2, 10}) {
    EXPECT_NEAR(m::tempered_sibuya_pmf(k, g, a), m::sibuya_pmf(k, g) * std::pow(a, k) / norm, 1e-15);
  }
}

TEST(Geometric, ClosedForms) {
  const double p = 0.3;
  EXPECT_NEAR(m::geometric_pmf(4, p), p * std::pow(0.7, 3), 1e-16);
  EXPECT_NEAR(m::geometric_pgf(0.5, p), p * 0.5 / (1.0 - 0.7 * 0.5), 1e-16);
  const std::int64_t M = 5;
  double sum = 0.0;
  for (int k = 1; k <= M; ++k) sum += p * std::pow(0.7, k - 1) * std::pow(0.5, k);
  EXPECT_NEAR(m::trunc_geometric_pgf(0.5, p, M), sum / (1.0 - std::pow(0.7, M)), 1e-15);
  EXPECT_THROW(m::trunc_geometric_pmf(M + 1, p, M), ValidationError);
}

TEST(Pareto, LaplaceTransformByQuadrature) {
  for (double a : {0.5, 2.0}) {
    for (double s : {0.1, 1.0, 3.0}) {
      const double oracle =
          half_line([&](double y) { return std::exp(-s * (1.0 + y)) * a * std::pow(1.0 + y, -a - 1.0); });
      EXPECT_NEAR(m::pareto_lt(s, a), oracle, 1e-10);
    }
  }
  EXPECT_NEAR(m::pareto_cdf(4.0, 2.0), 1.0 - 1.0 / 16.0, 1e-16);
}

TEST(Exponential, ClosedForms) {
  EXPECT_NEAR(m::exponential_lt(2.0, 1.5), 1.0 / (1.0 + 3.0), 1e-16);
  EXPECT_NEAR(std::abs(m::exponential_cf(1.0, 2.0) - 1.0 / std::complex<double>(1.0, -2.0)), 0.0, 1e-16);
  EXPECT_NEAR(m::exponential_cdf(1.0, 2.0), 1.0 - std::exp(-0.5), 1e-16);
}

TEST(LaplaceComplement, AccurateForSmallArguments) {
  // 1 - exp(-sqrt(2s)) ~ sqrt(2s) for tiny s.
  const double s = 1e-20;
  EXPECT_NEAR(m::laplace_complement(m::Levy{1.0}, s), -std::expm1(-std::sqrt(2 * s)), 1e-25);
  EXPECT_NEAR(m::laplace_complement(m::Exponential{1.0}, s), s / (1 + s), 1e-30);
}

}  // namespace
