#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>

#include "tempertail/models.hpp"
#include "tempertail/rng.hpp"

namespace tempertail::tempering {

/// Multiply the density by e^{-a x} and renormalize.
struct ExponentialTilt {
  double a = 1.0;
};
/// Hard truncation at M; on SubGaussian it truncates the mixing variable.
struct Truncate {
  double bound = 1.0;
};
/// Right-step probability p in (1/2,1) for the +-1 walk.
struct DriftWalk {
  double p = 0.75;
};
/// Total move budget M >= 2 for the walk.
struct TruncateWalk {
  std::int64_t budget = 2;
};
/// Geometric count conditioned on {1..M}, M > 1.
struct CountTruncate {
  std::int64_t bound = 2;
};
/// Sibuya conditioned on {1..M}, M >= 1.
struct SibuyaTruncate {
  std::int64_t bound = 1;
};
/// PGF (1-(1-az)^gamma)/(1-(1-a)^gamma), a in (0,1].
struct SibuyaTemper {
  double a = 1.0;
};
/// Sub-Gaussian with the mixing variable exponentially tilted by a.
struct SubGaussianV1 {
  double a = 1.0;
};
/// Y B_a^{1/beta} with Y symmetric beta-stable and B_a a tilted
/// (2 alpha / beta)-stable.
struct SubGaussianV2 {
  double beta = 1.6;
  double a = 1.0;
};
/// Sub-Gaussian with the mixing variable replaced by min(A, M).
struct SubGaussianV3 {
  double bound = 1.0;
};

using TemperingSpec =
    std::variant<ExponentialTilt, Truncate, DriftWalk, TruncateWalk, CountTruncate,
                 SibuyaTruncate, SibuyaTemper, SubGaussianV1, SubGaussianV2, SubGaussianV3>;

/// Throws ValidationError naming the violated range.
void validate(const TemperingSpec& spec);
std::string_view name(const TemperingSpec& spec);
std::string describe(const TemperingSpec& spec);

/// One row of the supported (base, tempering) table.
struct PairRule {
  std::string_view base;
  std::string_view spec;
  std::string_view result;
};

/// Every pair temper() accepts.
std::span<const PairRule> pair_table();
/// The table as aligned plain text, one rule per line.
std::string pair_table_text();

/// Map a base model to its tempered counterpart. Throws IncompatibleTempering
/// for pairs outside pair_table(), ValidationError for out-of-range values.
models::ModelSpec temper(const models::ModelSpec& base, const TemperingSpec& spec);

/// Refusal threshold on A a^alpha for the tilt rejection loop.
inline constexpr double kMaxTiltExponent = 30.0;

struct TiltDraw {
  double value = 0.0;
  std::uint64_t attempts = 0;
};

/// Density proportional to e^{-a x} times the positive stable density with
/// LT exp(-A s^alpha): draw the base law, accept with probability e^{-a X}.
/// The acceptance rate is exp(-A a^alpha); throws SamplingError when
/// A a^alpha exceeds kMaxTiltExponent.
double tilt_sampler(double alpha, double scale, double a, Rng& rng);
TiltDraw tilt_sampler_counted(double alpha, double scale, double a, Rng& rng);

/// Z * A_a^{1/2}, A_a the tilted positive alpha-stable with A = 1.
double subgaussian_v1_sampler(double alpha, double a, Rng& rng);
/// Y * B_a^{1/beta}; a = 0 reproduces the SubGaussian{alpha} law.
double subgaussian_v2_sampler(double alpha, double beta, double a, Rng& rng);
/// Z * min(A, M)^{1/2}.
double subgaussian_v3_sampler(double alpha, double bound, Rng& rng);

}  // namespace tempertail::tempering
