#include "tempertail/tempering.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

#include "tempertail/errors.hpp"
#include "tempertail/samplers.hpp"

namespace tempertail::tempering {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

[[noreturn]] void fail(const std::string& what) { throw ValidationError(what); }

std::string format_double(double x) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), end);
}

constexpr std::array<PairRule, 15> kPairs = {{
    {"levy", "exponential-tilt(a)", "inverse-gaussian(lambda=sigma, mu=sqrt(sigma/(2a)))"},
    {"positive-stable", "exponential-tilt(a)", "tempered-positive-stable(alpha, A, a)"},
    {"tempered-positive-stable", "exponential-tilt(b)", "tempered-positive-stable(alpha, A, a+b)"},
    {"walk-fpt", "drift-walk(p)", "biased-walk-fpt(p)"},
    {"walk-fpt", "truncate-walk(M)", "trunc-walk-fpt(M)"},
    {"geometric", "count-truncate(M)", "trunc-geometric(p, M)"},
    {"geometric", "truncate(M)", "trunc-geometric(p, M), M integer > 1"},
    {"sibuya", "sibuya-truncate(M)", "trunc-sibuya(gamma, M)"},
    {"sibuya", "truncate(M)", "trunc-sibuya(gamma, M), M integer >= 1"},
    {"sibuya", "sibuya-temper(a)", "tempered-sibuya(gamma, a)"},
    {"subgaussian", "subgaussian-v1(a)", "tempered-subgaussian(alpha, a)"},
    {"subgaussian", "subgaussian-v2(beta, a)", "tempered-stable-mix(alpha, beta, a)"},
    {"subgaussian", "subgaussian-v3(M)", "trunc-subgaussian(alpha, M)"},
    {"subgaussian", "truncate(M)", "trunc-subgaussian(alpha, M)"},
    {"exponential", "exponential-tilt(a)", "exponential(scale/(1 + a scale))"},
}};

std::int64_t integer_bound(double bound, double minimum, std::string_view what) {
  if (std::floor(bound) != bound || bound < minimum || bound > 9.0e18) {
    fail("truncate: bound M must be an integer >= " + format_double(minimum) + " for " +
         std::string(what));
  }
  return static_cast<std::int64_t>(bound);
}

[[noreturn]] void incompatible(const models::ModelSpec& base, const TemperingSpec& spec) {
  throw IncompatibleTempering("no tempering rule for (" + std::string(base.name()) + ", " +
                              std::string(name(spec)) + ")\n" + pair_table_text());
}

}  // namespace

void validate(const TemperingSpec& spec) {
  std::visit(overloaded{
                 [](const ExponentialTilt& s) {
                   if (!(s.a > 0.0) || !std::isfinite(s.a)) fail("exponential-tilt: a must be > 0");
                 },
                 [](const Truncate& s) {
                   if (!(s.bound > 0.0) || !std::isfinite(s.bound)) {
                     fail("truncate: bound M must be > 0");
                   }
                 },
                 [](const DriftWalk& s) {
                   if (!(s.p > 0.5 && s.p < 1.0)) fail("drift-walk: p must lie in (1/2,1)");
                 },
                 [](const TruncateWalk& s) {
                   if (s.budget < 2) fail("truncate-walk: budget M must be an integer >= 2");
                 },
                 [](const CountTruncate& s) {
                   if (s.bound < 2) fail("count-truncate: bound M must be an integer > 1");
                 },
                 [](const SibuyaTruncate& s) {
                   if (s.bound < 1) fail("sibuya-truncate: bound M must be an integer >= 1");
                 },
                 [](const SibuyaTemper& s) {
                   if (!(s.a > 0.0 && s.a <= 1.0)) fail("sibuya-temper: a must lie in (0,1]");
                 },
                 [](const SubGaussianV1& s) {
                   if (!(s.a > 0.0) || !std::isfinite(s.a)) fail("subgaussian-v1: a must be > 0");
                 },
                 [](const SubGaussianV2& s) {
                   if (!(s.beta > 0.0 && s.beta < 2.0)) {
                     fail("subgaussian-v2: beta must lie in (0,2)");
                   }
                   if (!(s.a > 0.0) || !std::isfinite(s.a)) fail("subgaussian-v2: a must be > 0");
                 },
                 [](const SubGaussianV3& s) {
                   if (!(s.bound > 0.0) || !std::isfinite(s.bound)) {
                     fail("subgaussian-v3: bound M must be > 0");
                   }
                 },
             },
             spec);
}

std::string_view name(const TemperingSpec& spec) {
  static constexpr std::array<std::string_view, std::variant_size_v<TemperingSpec>> kNames = {
      "exponential-tilt", "truncate",          "drift-walk",    "truncate-walk",
      "count-truncate",   "sibuya-truncate",   "sibuya-temper", "subgaussian-v1",
      "subgaussian-v2",   "subgaussian-v3"};
  return kNames[spec.index()];
}

std::string describe(const TemperingSpec& spec) {
  const std::string args = std::visit(
      overloaded{
          [](const ExponentialTilt& s) { return "a=" + format_double(s.a); },
          [](const Truncate& s) { return "bound=" + format_double(s.bound); },
          [](const DriftWalk& s) { return "p=" + format_double(s.p); },
          [](const TruncateWalk& s) { return "budget=" + std::to_string(s.budget); },
          [](const CountTruncate& s) { return "bound=" + std::to_string(s.bound); },
          [](const SibuyaTruncate& s) { return "bound=" + std::to_string(s.bound); },
          [](const SibuyaTemper& s) { return "a=" + format_double(s.a); },
          [](const SubGaussianV1& s) { return "a=" + format_double(s.a); },
          [](const SubGaussianV2& s) {
            return "beta=" + format_double(s.beta) + ", a=" + format_double(s.a);
          },
          [](const SubGaussianV3& s) { return "bound=" + format_double(s.bound); },
      },
      spec);
  return std::string(name(spec)) + "(" + args + ")";
}

std::span<const PairRule> pair_table() { return kPairs; }

std::string pair_table_text() {
  std::size_t base_width = 4, spec_width = 9;
  for (const auto& rule : kPairs) {
    base_width = std::max(base_width, rule.base.size());
    spec_width = std::max(spec_width, rule.spec.size());
  }
  std::ostringstream out;
  auto row = [&](std::string_view base, std::string_view spec, std::string_view result) {
    out << base << std::string(base_width - base.size() + 2, ' ') << spec
        << std::string(spec_width - spec.size() + 2, ' ') << result << '\n';
  };
  row("base", "tempering", "result");
  for (const auto& rule : kPairs) row(rule.base, rule.spec, rule.result);
  return out.str();
}

models::ModelSpec temper(const models::ModelSpec& base, const TemperingSpec& spec) {
  using namespace models;
  validate(spec);
  const Params& p = base.params();
  return std::visit(
      overloaded{
          [&](const ExponentialTilt& s) -> ModelSpec {
            if (const auto* m = std::get_if<Levy>(&p)) {
              // e^{-a x} matches the e^{-sigma x/(2 mu^2)} factor of the IG density.
              return InverseGaussian{m->sigma, std::sqrt(m->sigma / (2.0 * s.a))};
            }
            if (const auto* m = std::get_if<PositiveStable>(&p)) {
              return TemperedPositiveStable{m->alpha, m->scale, s.a};
            }
            if (const auto* m = std::get_if<TemperedPositiveStable>(&p)) {
              return TemperedPositiveStable{m->alpha, m->scale, m->tilt + s.a};
            }
            if (const auto* m = std::get_if<Exponential>(&p)) {
              return Exponential{m->scale / (1.0 + s.a * m->scale)};
            }
            incompatible(base, spec);
          },
          [&](const Truncate& s) -> ModelSpec {
            if (const auto* m = std::get_if<Geometric>(&p)) {
              return TruncGeometric{m->p, integer_bound(s.bound, 2.0, "geometric")};
            }
            if (const auto* m = std::get_if<Sibuya>(&p)) {
              return TruncSibuya{m->gamma, integer_bound(s.bound, 1.0, "sibuya")};
            }
            if (const auto* m = std::get_if<SubGaussian>(&p)) {
              return TruncSubGaussian{m->alpha, s.bound};
            }
            incompatible(base, spec);
          },
          [&](const DriftWalk& s) -> ModelSpec {
            if (std::holds_alternative<WalkFpt>(p)) return BiasedWalkFpt{s.p};
            incompatible(base, spec);
          },
          [&](const TruncateWalk& s) -> ModelSpec {
            if (std::holds_alternative<WalkFpt>(p)) return TruncWalkFpt{s.budget};
            incompatible(base, spec);
          },
          [&](const CountTruncate& s) -> ModelSpec {
            if (const auto* m = std::get_if<Geometric>(&p)) return TruncGeometric{m->p, s.bound};
            incompatible(base, spec);
          },
          [&](const SibuyaTruncate& s) -> ModelSpec {
            if (const auto* m = std::get_if<Sibuya>(&p)) return TruncSibuya{m->gamma, s.bound};
            incompatible(base, spec);
          },
          [&](const SibuyaTemper& s) -> ModelSpec {
            if (const auto* m = std::get_if<Sibuya>(&p)) return TemperedSibuya{m->gamma, s.a};
            incompatible(base, spec);
          },
          [&](const SubGaussianV1& s) -> ModelSpec {
            if (const auto* m = std::get_if<SubGaussian>(&p)) {
              return TemperedSubGaussian{m->alpha, s.a};
            }
            incompatible(base, spec);
          },
          [&](const SubGaussianV2& s) -> ModelSpec {
            if (const auto* m = std::get_if<SubGaussian>(&p)) {
              return TemperedStableMix{m->alpha, s.beta, s.a};
            }
            incompatible(base, spec);
          },
          [&](const SubGaussianV3& s) -> ModelSpec {
            if (const auto* m = std::get_if<SubGaussian>(&p)) {
              return TruncSubGaussian{m->alpha, s.bound};
            }
            incompatible(base, spec);
          },
      },
      spec);
}

TiltDraw tilt_sampler_counted(double alpha, double scale, double a, Rng& rng) {
  models::validate(models::TemperedPositiveStable{alpha, scale, a});
  const double exponent = scale * std::pow(a, alpha);
  if (exponent > kMaxTiltExponent) {
    std::string hint = alpha == 0.5 ? "; use the inverse-gaussian closed form (levy + exponential-tilt)"
                                    : "";
    throw SamplingError("tilt sampler: A a^alpha = " + format_double(exponent) +
                        " exceeds 30, acceptance rate exp(-A a^alpha) is too small" + hint);
  }
  TiltDraw draw;
  for (;;) {
    ++draw.attempts;
    const double x = samplers::sample_positive_stable(alpha, scale, rng);
    if (a == 0.0 || rng.uniform() <= std::exp(-a * x)) {
      draw.value = x;
      return draw;
    }
  }
}

double tilt_sampler(double alpha, double scale, double a, Rng& rng) {
  return tilt_sampler_counted(alpha, scale, a, rng).value;
}

double subgaussian_v1_sampler(double alpha, double a, Rng& rng) {
  const double mix = tilt_sampler(alpha, 1.0, a, rng);
  return rng.normal() * std::sqrt(mix);
}

double subgaussian_v2_sampler(double alpha, double beta, double a, Rng& rng) {
  models::validate(models::TemperedStableMix{alpha, beta, a});
  const double gamma = 2.0 * alpha / beta;
  const double mix = tilt_sampler(gamma, 1.0, a, rng);
  const double y = samplers::sample_symmetric_stable(beta, models::stable_mix_scale(alpha, beta), rng);
  return y * std::pow(mix, 1.0 / beta);
}

double subgaussian_v3_sampler(double alpha, double bound, Rng& rng) {
  models::validate(models::TruncSubGaussian{alpha, bound});
  const double mix = std::min(samplers::sample_positive_stable(alpha, 1.0, rng), bound);
  return rng.normal() * std::sqrt(mix);
}

}  // namespace tempertail::tempering
