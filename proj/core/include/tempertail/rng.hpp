#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

namespace tempertail {

/// Philox4x64-10 counter-based generator (Salmon et al., Random123).
///
/// The 128-bit key is (seed, stream) and the 256-bit counter is
/// (block, 0, substream, 0). Each block yields four 64-bit words. Two
/// generators with different (seed, stream, substream) triples produce
/// non-overlapping, statistically independent sequences; the same triple
/// always produces the same sequence on every platform.
class Rng {
 public:
  using result_type = std::uint64_t;
  static constexpr std::string_view kAlgorithm = "philox4x64-10";

  explicit Rng(std::uint64_t seed = 0, std::uint64_t stream = 0,
               std::uint64_t substream = 0) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    if (pos_ == 4) refill();
    return buffer_[pos_++];
  }

  /// Uniform on the open interval (0,1); 53-bit resolution.
  double uniform() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }
  /// Standard Gaussian by Box-Muller; the second variate of each pair is cached.
  double normal() noexcept;
  /// Unit-rate exponential by the 256-layer ziggurat; never returns 0.
  double exponential() noexcept;

  std::uint64_t seed() const noexcept { return key_[0]; }
  std::uint64_t stream() const noexcept { return key_[1]; }
  std::uint64_t substream() const noexcept { return substream_; }
  /// Number of 4-word blocks consumed so far.
  std::uint64_t blocks() const noexcept { return block_; }

  /// Raw block function, exposed for known-answer tests.
  static std::array<std::uint64_t, 4> philox4x64_10(
      std::array<std::uint64_t, 4> counter, std::array<std::uint64_t, 2> key) noexcept;

 private:
  void refill() noexcept;

  std::array<std::uint64_t, 2> key_;
  std::uint64_t substream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 4> buffer_{};
  int pos_ = 4;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

/// Seed plus stream id; the reproducible identity of a batch of draws.
struct RngState {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  /// Generator for the given chunk of a batch.
  Rng substream(std::uint64_t chunk) const noexcept { return Rng(seed, stream, chunk); }
  /// Derive an unrelated stream id for a sub-task (e.g. the second batch of a
  /// two-sample comparison).
  RngState fork(std::uint64_t tag) const noexcept;
};

}  // namespace tempertail
