#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "tempertail/parallel.hpp"
#include "tempertail/rng.hpp"
#include "tempertail/samplers.hpp"

namespace {

using tempertail::Rng;
using tempertail::RngState;

using Block = std::array<std::uint64_t, 4>;

// Known answers cross-checked against numpy.random.Philox.
TEST(Philox, KnownAnswers) {
  EXPECT_EQ(Rng::philox4x64_10({0, 0, 0, 0}, {0, 0}),
            (Block{0x16554d9eca36314cULL, 0xdb20fe9d672d0fdcULL, 0xd7e772cee186176bULL, 0x7e68b68aec7ba23bULL}));
  const std::uint64_t ones = ~0ULL;
  EXPECT_EQ(Rng::philox4x64_10({ones, ones, ones, ones}, {ones, ones}),
            (Block{0x87b092c3013fe90bULL, 0x438c3c67be8d0224ULL, 0x9cc7d7c69cd777b6ULL, 0xa09caebf594f0ba0ULL}));
  EXPECT_EQ(Rng::philox4x64_10({0x243f6a8885a308d3ULL, 0x13198a2e03707344ULL, 0xa4093822299f31d0ULL,
                                0x082efa98ec4e6c89ULL},
                               {0x452821e638d01377ULL, 0xbe5466cf34e90c6cULL}),
            (Block{0xa528f45403e61d95ULL, 0x38c72dbd566e9788ULL, 0xa5a1610e72fd18b5ULL, 0x57bd43b5e52b7fe6ULL}));
}

TEST(Philox, CounterLayout) {
  // Block b of (seed, stream, substream) is philox({b, 0, substream, 0}, {seed, stream}).
  Rng rng(7, 3, 2);
  for (int skip = 0; skip < 20; ++skip) rng();
  const auto expected = Rng::philox4x64_10({5, 0, 2, 0}, {7, 3});
  EXPECT_EQ(expected, (Block{0xd133f7033436a615ULL, 0xd759c3cecf2b67bfULL, 0x6df5e7c4f304a364ULL,
                             0xa89a0125db259cfcULL}));
  for (auto word : expected) EXPECT_EQ(rng(), word);
  EXPECT_EQ(rng.blocks(), 6u);
}

TEST(Rng, SameTripleSameSequence) {
  Rng a(11, 4, 9), b(11, 4, 9), c(11, 5, 9);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    differs |= x != c();
  }
  EXPECT_TRUE(differs);
}

TEST(Rng, UniformOpenInterval) {
  Rng rng(1);
  double sum = 0.0;
  constexpr int n = 200'000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST(Rng, ExponentialMoments) {
  Rng rng(2);
  constexpr int n = 400'000;
  double m1 = 0.0, m2 = 0.0, tail = 0.0;
  for (int i = 0; i < n; ++i) {
    const double e = rng.exponential();
    ASSERT_GT(e, 0.0);
    m1 += e;
    m2 += e * e;
    tail += e > 5.0 ? 1.0 : 0.0;
  }
  // Var E = 1, Var E^2 = 20, P{E > 5} = e^{-5}.
  EXPECT_NEAR(m1 / n, 1.0, 4.0 / std::sqrt(n));
  EXPECT_NEAR(m2 / n, 2.0, 4.0 * std::sqrt(20.0 / n));
  const double p = std::exp(-5.0);
  EXPECT_NEAR(tail / n, p, 4.0 * std::sqrt(p * (1 - p) / n));
}

TEST(Rng, NormalMoments) {
  Rng rng(3);
  constexpr int n = 400'000;
  double m1 = 0.0, m2 = 0.0, m4 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    m1 += z;
    m2 += z * z;
    m4 += z * z * z * z;
  }
  EXPECT_NEAR(m1 / n, 0.0, 4.0 / std::sqrt(n));
  EXPECT_NEAR(m2 / n, 1.0, 4.0 * std::sqrt(2.0 / n));
  EXPECT_NEAR(m4 / n, 3.0, 4.0 * std::sqrt(96.0 / n));
}

TEST(RngState, ForkGivesDistinctStreams) {
  const RngState s{5, 0};
  std::set<std::uint64_t> streams{s.stream};
  for (std::uint64_t tag = 0; tag < 50; ++tag) streams.insert(s.fork(tag).stream);
  EXPECT_EQ(streams.size(), 51u);
  EXPECT_EQ(s.fork(3).stream, s.fork(3).stream);
  EXPECT_EQ(s.fork(3).seed, 5u);
}

TEST(Generate, ChunkUsesItsSubstream) {
  const RngState state{9, 1};
  const std::size_t n = 2 * tempertail::kChunkSize + 17;
  const auto values = tempertail::samplers::generate(n, state, [](Rng& r) { return r.uniform(); });
  ASSERT_EQ(values.size(), n);
  for (std::uint64_t chunk = 0; chunk < 3; ++chunk) {
    Rng rng = state.substream(chunk);
    const std::size_t begin = chunk * tempertail::kChunkSize;
    for (std::size_t i = begin; i < std::min(n, begin + tempertail::kChunkSize); ++i) {
      ASSERT_EQ(values[i], rng.uniform()) << "index " << i;
    }
  }
}

}  // namespace
