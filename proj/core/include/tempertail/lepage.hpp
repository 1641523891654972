#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "tempertail/models.hpp"
#include "tempertail/rng.hpp"
#include "tempertail/samplers.hpp"

namespace tempertail::lepage {

enum class Scenario { Generic, Coulomb, Newton, BaseStation };
std::string_view to_string(Scenario scenario);
Scenario parse_scenario(std::string_view text);

/// X_j identically equal to `value`.
struct ConstantMultiplier {
  double value = 1.0;
};
/// X_j = +-magnitude with probability 1/2 each.
struct RademacherMultiplier {
  double magnitude = 1.0;
};
using MultiplierLaw = std::variant<ConstantMultiplier, RademacherMultiplier, models::ModelSpec>;

std::string describe(const MultiplierLaw& law);
/// Law of X_j is symmetric about 0.
bool is_symmetric(const MultiplierLaw& law);
/// X_j > 0 almost surely.
bool is_positive(const MultiplierLaw& law);
/// sup{r : E|X|^r < inf}; +inf for laws with all moments.
double moment_order(const MultiplierLaw& law);
/// E|X| and E X^2 where known in closed form.
std::optional<double> mean_abs(const MultiplierLaw& law);
std::optional<double> second_moment(const MultiplierLaw& law);

/// Sum_{j<=terms} X_j Gamma_j^{-1/alpha}, Gamma_j the arrival times of a
/// unit-rate Poisson process.
struct LePageConfig {
  double alpha = 0.5;
  MultiplierLaw multiplier = ConstantMultiplier{1.0};
  std::int64_t terms = 10'000;
  Scenario scenario = Scenario::Generic;
};

/// Exponent forced by a physical scenario: 1/2 for coulomb and newton,
/// 1/2.6 for basestation; nullopt for generic.
std::optional<double> scenario_alpha(Scenario scenario);
/// Term budget used when a scenario is run without an explicit one.
std::int64_t default_terms(Scenario scenario);
/// Multiplier used when a scenario is run without an explicit one:
/// +-1 charges, unit masses, unit-mean exponential signal powers.
MultiplierLaw default_multiplier(Scenario scenario);

/// Rejects: alpha outside (0,2); terms < 1; alpha >= 1 with an asymmetric
/// multiplier; multipliers lacking an absolute moment of order above alpha;
/// a scenario whose forced exponent differs from alpha; non-positive
/// multipliers in the newton scenario.
void validate(const LePageConfig& cfg);

/// Estimated size of the dropped tail Sum_{j>N}. For symmetric multipliers
/// the standard deviation sqrt(E X^2 N^{1-2/alpha} / (2/alpha - 1)); otherwise
/// (alpha < 1) the mean bound E|X| N^{1-1/alpha} / (1/alpha - 1). NaN when the
/// needed moment is unknown or infinite.
double residual_bound(const LePageConfig& cfg);

/// Scale A of the limiting LT exp(-A s^alpha) for positive multipliers and
/// alpha < 1: A = Gamma(1-alpha) E[X^alpha]. Known for constant multipliers and
/// model laws with a closed-form E[X^alpha].
std::optional<double> stable_scale(const LePageConfig& cfg);

struct LePageDraw {
  double value = 0.0;
  double residual_bound = 0.0;
  std::int64_t terms = 0;
};

/// One truncated series draw. Throws SamplingError if the arrival times fail
/// to increase strictly.
LePageDraw simulate_lepage(const LePageConfig& cfg, Rng& rng);

/// Partial sums of one series draw at the given increasing term counts; the
/// last checkpoint must not exceed cfg.terms.
std::vector<double> lepage_path(const LePageConfig& cfg, const std::vector<std::int64_t>& checkpoints,
                                Rng& rng);

/// n series draws, metadata recording scenario, implied alpha, terms and the
/// residual bound.
samplers::SampleBatch simulate_batch(const LePageConfig& cfg, std::size_t n, const RngState& rng);

/// simulate_batch for a named scenario with its forced exponent.
samplers::SampleBatch scenario_force(Scenario scenario, const MultiplierLaw& multiplier,
                                     std::size_t n, const RngState& rng,
                                     std::optional<std::int64_t> terms = std::nullopt);

}  // namespace tempertail::lepage
