#include "tempertail/rng.hpp"

#include <cmath>
#include <numbers>

namespace tempertail {
namespace {

constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
  __extension__ using u128 = unsigned __int128;
  const u128 product = static_cast<u128>(a) * b;
  hi = static_cast<std::uint64_t>(product >> 64);
  lo = static_cast<std::uint64_t>(product);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// 256-layer exponential ziggurat (Marsaglia and Tsang) on 53-bit integers.
struct ExpZiggurat {
  static constexpr double kR = 7.69711747013104972;
  static constexpr double kArea = 3.949659822581572e-3;
  std::array<std::uint64_t, 256> k{};
  std::array<double, 256> w{};
  std::array<double, 256> f{};

  ExpZiggurat() {
    constexpr double scale = 0x1.0p53;
    double d = kR;
    double t = d;
    const double q = kArea / std::exp(-d);
    k[0] = static_cast<std::uint64_t>((d / q) * scale);
    k[1] = 0;
    w[0] = q / scale;
    w[255] = d / scale;
    f[0] = 1.0;
    f[255] = std::exp(-d);
    for (int i = 254; i >= 1; --i) {
      d = -std::log(kArea / d + std::exp(-d));
      k[i + 1] = static_cast<std::uint64_t>((d / t) * scale);
      t = d;
      f[i] = std::exp(-d);
      w[i] = d / scale;
    }
  }
};

const ExpZiggurat& exp_ziggurat() {
  static const ExpZiggurat table;
  return table;
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream) noexcept
    : key_{seed, stream}, substream_(substream) {}

std::array<std::uint64_t, 4> Rng::philox4x64_10(std::array<std::uint64_t, 4> ctr,
                                                std::array<std::uint64_t, 2> key) noexcept {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

void Rng::refill() noexcept {
  buffer_ = philox4x64_10({block_, 0, substream_, 0}, key_);
  ++block_;
  pos_ = 0;
}

double Rng::normal() noexcept {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  const double radius = std::sqrt(-2.0 * std::log(uniform()));
  const double angle = 2.0 * std::numbers::pi * uniform();
  cached_normal_ = radius * std::sin(angle);
  has_cached_normal_ = true;
  return radius * std::cos(angle);
}

double Rng::exponential() noexcept {
  const auto& z = exp_ziggurat();
  for (;;) {
    std::uint64_t bits = (*this)() >> 3;
    const auto layer = static_cast<std::size_t>(bits & 0xFF);
    bits >>= 8;
    const double x = (static_cast<double>(bits) + 0.5) * z.w[layer];
    if (bits < z.k[layer]) return x;
    if (layer == 0) return ExpZiggurat::kR - std::log(uniform());
    if ((z.f[layer - 1] - z.f[layer]) * uniform() + z.f[layer] < std::exp(-x)) return x;
  }
}

RngState RngState::fork(std::uint64_t tag) const noexcept {
  return RngState{seed, splitmix64(stream ^ splitmix64(tag + 1))};
}

}  // namespace tempertail
