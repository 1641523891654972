#include <gtest/gtest.h>

#include <cmath>

#include "tempertail/errors.hpp"
#include "tempertail/estimation.hpp"
#include "tempertail/models.hpp"
#include "tempertail/samplers.hpp"

namespace {

namespace m = tempertail::models;
namespace s = tempertail::samplers;
using tempertail::RngState;

constexpr std::size_t kN = 20'000;

double ks_against(const m::ModelSpec& model, std::uint64_t stream) {
  const auto batch = s::sample(model, kN, RngState{17, stream});
  return tempertail::estimation::ks_distance(batch.values, [&](double x) { return m::cdf(model, x); });
}

TEST(Samplers, ContinuousLawsMatchTheirCdf) {
  const double critical = tempertail::estimation::ks_critical(1e-3, kN);
  EXPECT_LT(ks_against(m::Levy{1.5}, 1), critical);
  EXPECT_LT(ks_against(m::InverseGaussian{2.0, 0.7}, 2), critical);
  EXPECT_LT(ks_against(m::PositiveStable{0.5, 1.0}, 3), critical);
  EXPECT_LT(ks_against(m::PositiveStable{0.3, 2.0}, 4), critical);
  EXPECT_LT(ks_against(m::Pareto{1.5}, 5), critical);
  EXPECT_LT(ks_against(m::Exponential{3.0}, 6), critical);
}

void expect_atoms_match(const m::ModelSpec& model, int atoms, std::uint64_t stream) {
  const auto batch = s::sample(model, kN, RngState{23, stream});
  for (int k = 1; k <= atoms; ++k) {
    const double p = m::pmf(model, k);
    double hits = 0.0;
    for (double x : batch.values) hits += x == k ? 1.0 : 0.0;
    const double se = std::sqrt(p * (1.0 - p) / kN);
    EXPECT_NEAR(hits / kN, p, 4.5 * se + 1e-12) << model.describe() << " k=" << k;
  }
}

TEST(Samplers, DiscreteLawsMatchTheirPmf) {
  expect_atoms_match(m::Sibuya{0.5}, 6, 1);
  expect_atoms_match(m::TruncSibuya{0.3, 8}, 8, 2);
  expect_atoms_match(m::TemperedSibuya{0.6, 0.8}, 6, 3);
  expect_atoms_match(m::Geometric{0.4}, 6, 4);
  expect_atoms_match(m::TruncGeometric{0.2, 5}, 5, 5);
  expect_atoms_match(m::WalkFpt{}, 9, 6);
  expect_atoms_match(m::BiasedWalkFpt{0.8}, 9, 7);
  expect_atoms_match(m::TruncWalkFpt{6}, 5, 8);
}

TEST(Samplers, SupportHolds) {
  for (const m::ModelSpec& model :
       {m::ModelSpec(m::WalkFpt{}), m::ModelSpec(m::TruncWalkFpt{10}), m::ModelSpec(m::Sibuya{0.2}),
        m::ModelSpec(m::TruncSibuya{0.5, 30}), m::ModelSpec(m::TruncGeometric{0.1, 7}), m::ModelSpec(m::Pareto{0.5}),
        m::ModelSpec(m::TemperedPositiveStable{0.7, 1.0, 2.0})}) {
    const auto batch = s::sample(model, 5'000, RngState{3, 4});
    for (double x : batch.values) ASSERT_TRUE(m::in_support(model, x)) << model.describe() << " " << x;
  }
}

TEST(Samplers, SibuyaOneIsDegenerate) {
  const auto batch = s::sample(m::Sibuya{1.0}, 1000, RngState{1, 1});
  for (double x : batch.values) ASSERT_EQ(x, 1.0);
}

TEST(Samplers, SymmetricStableScale) {
  // CF exp(-c|t|^beta) at t = 1 is E cos X.
  const double beta = 1.3, c = 0.7;
  const auto values = s::generate(200'000, RngState{5, 5}, [&](tempertail::Rng& r) {
    return s::sample_symmetric_stable(beta, c, r);
  });
  const auto t = tempertail::estimation::empirical_transform(values, m::TransformKind::CF, {1.0});
  EXPECT_NEAR(t.values[0].real(), std::exp(-c), 4.0 * t.std_errors[0]);
}

TEST(Samplers, DeterministicBatches) {
  const auto a = s::sample(m::Sibuya{0.5}, 10'000, RngState{7, 0});
  const auto b = s::sample(m::Sibuya{0.5}, 10'000, RngState{7, 0});
  const auto c = s::sample(m::Sibuya{0.5}, 10'000, RngState{8, 0});
  EXPECT_EQ(a.values, b.values);
  EXPECT_NE(a.values, c.values);
  ASSERT_TRUE(a.model.has_value());
  EXPECT_EQ(*a.model, m::ModelSpec(m::Sibuya{0.5}));
}

TEST(Samplers, CtsAboveOneIsNotSampled) {
  EXPECT_THROW(s::sample(m::Cts{1, 1, 1, 1, 1.5, 0}, 10, RngState{}), tempertail::SamplingError);
}

TEST(DiscreteTable, InverseCdf) {
  const s::DiscreteTable table({1.0, 2.0, 1.0});
  EXPECT_EQ(table.size(), 3u);
  EXPECT_DOUBLE_EQ(table.cumulative(1), 0.25);
  EXPECT_EQ(table.draw(0.1), 1.0);
  EXPECT_EQ(table.draw(0.5), 2.0);
  EXPECT_EQ(table.draw(0.9), 3.0);
}

}  // namespace
