#include "tempertail/lepage.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "tempertail/errors.hpp"
#include "tempertail/estimation.hpp"

namespace tempertail::lepage {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void fail(const std::string& what) { throw ValidationError("lepage: " + what); }

double model_moment_order(const models::ModelSpec& model) {
  using namespace models;
  return std::visit(
      overloaded{
          [](const Levy&) { return 0.5; },
          [](const PositiveStable& m) { return m.alpha; },
          [](const TemperedPositiveStable& m) { return m.tilt > 0.0 ? kInf : m.alpha; },
          [](const SubGaussian& m) { return 2.0 * m.alpha; },
          [](const TemperedSubGaussian& m) { return m.tilt > 0.0 ? kInf : 2.0 * m.alpha; },
          [](const TemperedStableMix& m) { return m.tilt > 0.0 ? m.beta : 2.0 * m.alpha; },
          [](const WalkFpt&) { return 0.5; },
          [](const Sibuya& m) { return m.gamma == 1.0 ? kInf : m.gamma; },
          [](const TemperedSibuya& m) {
            return m.tilt < 1.0 || m.gamma == 1.0 ? kInf : m.gamma;
          },
          [](const Pareto& m) { return m.shape; },
          [](const auto&) { return kInf; },
      },
      model.params());
}

// Sum_k k^power pmf(k) over a bounded support.
double bounded_moment(const models::ModelSpec& model, std::int64_t top, double power) {
  double sum = 0.0;
  for (std::int64_t k = 1; k <= top; ++k) {
    sum += std::pow(static_cast<double>(k), power) * models::pmf(model, k);
  }
  return sum;
}

std::optional<double> model_moment(const models::ModelSpec& model, double power) {
  using namespace models;
  return std::visit(
      overloaded{
          [&](const InverseGaussian& m) -> std::optional<double> {
            if (power == 1.0) return m.mu;
            if (power == 2.0) return m.mu * m.mu + m.mu * m.mu * m.mu / m.lambda;
            return std::nullopt;
          },
          [&](const TemperedPositiveStable& m) -> std::optional<double> {
            if (power == 1.0 && m.tilt > 0.0) {
              return m.scale * m.alpha * std::pow(m.tilt, m.alpha - 1.0);
            }
            return std::nullopt;
          },
          [&](const Exponential& m) -> std::optional<double> {
            return std::pow(m.scale, power) * std::tgamma(1.0 + power);
          },
          [&](const Pareto& m) -> std::optional<double> {
            if (m.shape <= power) return std::nullopt;
            return m.shape / (m.shape - power);
          },
          [&](const Geometric& m) -> std::optional<double> {
            if (power == 1.0) return 1.0 / m.p;
            if (power == 2.0) return (2.0 - m.p) / (m.p * m.p);
            return std::nullopt;
          },
          [&](const BiasedWalkFpt& m) -> std::optional<double> {
            if (power == 1.0) return 1.0 / (2.0 * m.p - 1.0);
            return std::nullopt;
          },
          [&](const TruncGeometric& m) -> std::optional<double> {
            return bounded_moment(model, m.bound, power);
          },
          [&](const TruncWalkFpt& m) -> std::optional<double> {
            return bounded_moment(model, 2 * (m.budget / 2) - 1, power);
          },
          [&](const TruncSibuya& m) -> std::optional<double> {
            return bounded_moment(model, m.bound, power);
          },
          [&](const TemperedSibuya& m) -> std::optional<double> {
            if (power == 1.0 && m.tilt < 1.0) {
              const double norm = -std::expm1(m.gamma * std::log1p(-m.tilt));
              return m.gamma * m.tilt * std::pow(1.0 - m.tilt, m.gamma - 1.0) / norm;
            }
            return std::nullopt;
          },
          [&](const Levy& m) -> std::optional<double> {
            // E (sigma/Z^2)^q = sigma^q 2^{-q} Gamma(1/2 - q) / sqrt(pi), q < 1/2.
            if (power >= 0.5) return std::nullopt;
            return std::pow(m.sigma, power) * std::pow(2.0, -power) * std::tgamma(0.5 - power) /
                   std::sqrt(std::numbers::pi);
          },
          [&](const auto&) -> std::optional<double> { return std::nullopt; },
      },
      model.params());
}

bool model_symmetric(const models::ModelSpec& model) {
  using namespace models;
  return std::visit(overloaded{
                        [](const SubGaussian&) { return true; },
                        [](const TemperedSubGaussian&) { return true; },
                        [](const TruncSubGaussian&) { return true; },
                        [](const TemperedStableMix&) { return true; },
                        [](const Cts& m) {
                          return m.c1 == m.c2 && m.lambda_plus == m.lambda_minus && m.mu == 0.0;
                        },
                        [](const auto&) { return false; },
                    },
                    model.params());
}

// Draws X_j; holds a prepared sampler for model laws.
class MultiplierDraw {
 public:
  explicit MultiplierDraw(const MultiplierLaw& law) : law_(law) {
    if (const auto* model = std::get_if<models::ModelSpec>(&law)) sampler_.emplace(*model);
  }
  double operator()(Rng& rng) const {
    return std::visit(overloaded{
                          [](const ConstantMultiplier& m) { return m.value; },
                          [&](const RademacherMultiplier& m) {
                            return rng.uniform() < 0.5 ? -m.magnitude : m.magnitude;
                          },
                          [&](const models::ModelSpec&) { return (*sampler_)(rng); },
                      },
                      law_);
  }

 private:
  MultiplierLaw law_;
  std::optional<samplers::Sampler> sampler_;
};

std::vector<double> path_with(const LePageConfig& cfg, const MultiplierDraw& multiplier,
                              const std::vector<std::int64_t>& checkpoints, Rng& rng) {
  std::vector<double> out;
  out.reserve(checkpoints.size());
  const double exponent = -1.0 / cfg.alpha;
  const bool square = exponent == -2.0;
  double arrival = 0.0;
  double sum = 0.0;
  std::size_t next = 0;
  const std::int64_t last = checkpoints.back();
  for (std::int64_t j = 1; j <= last; ++j) {
    const double previous = arrival;
    arrival += rng.exponential();
    if (!(arrival > previous)) throw SamplingError("lepage: arrival times must increase strictly");
    const double x = multiplier(rng);
    sum += square ? x / (arrival * arrival) : x * std::pow(arrival, exponent);
    if (j == checkpoints[next]) {
      out.push_back(sum);
      ++next;
    }
  }
  return out;
}

void check_checkpoints(const LePageConfig& cfg, const std::vector<std::int64_t>& checkpoints) {
  if (checkpoints.empty()) fail("need at least one checkpoint");
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] < 1 || (i > 0 && checkpoints[i] <= checkpoints[i - 1])) {
      fail("checkpoints must be positive and strictly increasing");
    }
  }
  if (checkpoints.back() > cfg.terms) fail("checkpoint beyond the term budget");
}

}  // namespace

std::string_view to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::Generic: return "generic";
    case Scenario::Coulomb: return "coulomb";
    case Scenario::Newton: return "newton";
    case Scenario::BaseStation: return "basestation";
  }
  return "?";
}

Scenario parse_scenario(std::string_view text) {
  for (Scenario s : {Scenario::Generic, Scenario::Coulomb, Scenario::Newton, Scenario::BaseStation}) {
    if (to_string(s) == text) return s;
  }
  throw ValidationError("unknown scenario '" + std::string(text) +
                        "' (expected generic|coulomb|newton|basestation)");
}

std::string describe(const MultiplierLaw& law) {
  return std::visit(overloaded{
                        [](const ConstantMultiplier& m) {
                          return "constant(" + estimation::format_double(m.value) + ")";
                        },
                        [](const RademacherMultiplier& m) {
                          return "rademacher(" + estimation::format_double(m.magnitude) + ")";
                        },
                        [](const models::ModelSpec& m) { return m.describe(); },
                    },
                    law);
}

bool is_symmetric(const MultiplierLaw& law) {
  return std::visit(overloaded{
                        [](const ConstantMultiplier& m) { return m.value == 0.0; },
                        [](const RademacherMultiplier&) { return true; },
                        [](const models::ModelSpec& m) { return model_symmetric(m); },
                    },
                    law);
}

bool is_positive(const MultiplierLaw& law) {
  return std::visit(overloaded{
                        [](const ConstantMultiplier& m) { return m.value > 0.0; },
                        [](const RademacherMultiplier&) { return false; },
                        [](const models::ModelSpec& m) { return m.is_positive(); },
                    },
                    law);
}

double moment_order(const MultiplierLaw& law) {
  if (const auto* model = std::get_if<models::ModelSpec>(&law)) return model_moment_order(*model);
  return kInf;
}

std::optional<double> mean_abs(const MultiplierLaw& law) {
  return std::visit(overloaded{
                        [](const ConstantMultiplier& m) -> std::optional<double> {
                          return std::abs(m.value);
                        },
                        [](const RademacherMultiplier& m) -> std::optional<double> {
                          return std::abs(m.magnitude);
                        },
                        [](const models::ModelSpec& m) -> std::optional<double> {
                          if (!m.is_positive()) return std::nullopt;
                          return model_moment(m, 1.0);
                        },
                    },
                    law);
}

std::optional<double> second_moment(const MultiplierLaw& law) {
  return std::visit(overloaded{
                        [](const ConstantMultiplier& m) -> std::optional<double> {
                          return m.value * m.value;
                        },
                        [](const RademacherMultiplier& m) -> std::optional<double> {
                          return m.magnitude * m.magnitude;
                        },
                        [](const models::ModelSpec& m) -> std::optional<double> {
                          if (!m.is_positive()) return std::nullopt;
                          return model_moment(m, 2.0);
                        },
                    },
                    law);
}

std::optional<double> scenario_alpha(Scenario scenario) {
  switch (scenario) {
    case Scenario::Coulomb:
    case Scenario::Newton: return 0.5;
    case Scenario::BaseStation: return 1.0 / 2.6;
    case Scenario::Generic: return std::nullopt;
  }
  return std::nullopt;
}

std::int64_t default_terms(Scenario scenario) {
  switch (scenario) {
    case Scenario::Coulomb:
    case Scenario::Newton: return 10'000;
    case Scenario::BaseStation: return 100;
    case Scenario::Generic: return 1'000;
  }
  return 1'000;
}

MultiplierLaw default_multiplier(Scenario scenario) {
  switch (scenario) {
    case Scenario::Coulomb: return RademacherMultiplier{1.0};
    case Scenario::BaseStation: return models::ModelSpec(models::Exponential{1.0});
    case Scenario::Newton:
    case Scenario::Generic: return ConstantMultiplier{1.0};
  }
  return ConstantMultiplier{1.0};
}

void validate(const LePageConfig& cfg) {
  if (!(cfg.alpha > 0.0 && cfg.alpha < 2.0)) fail("alpha must lie in (0,2)");
  if (cfg.terms < 1) fail("term budget N must be >= 1");
  if (const auto* c = std::get_if<ConstantMultiplier>(&cfg.multiplier); c && !std::isfinite(c->value)) {
    fail("constant multiplier must be finite");
  }
  if (const auto* r = std::get_if<RademacherMultiplier>(&cfg.multiplier);
      r && !(std::isfinite(r->magnitude) && r->magnitude >= 0.0)) {
    fail("rademacher magnitude must be finite and >= 0");
  }
  if (cfg.alpha >= 1.0 && !is_symmetric(cfg.multiplier)) {
    fail("alpha >= 1 needs a symmetric multiplier law");
  }
  if (!(moment_order(cfg.multiplier) > cfg.alpha)) {
    fail("multiplier " + describe(cfg.multiplier) + " has no absolute moment of order above alpha");
  }
  if (const auto forced = scenario_alpha(cfg.scenario);
      forced && std::abs(*forced - cfg.alpha) > 1e-12) {
    fail(std::string(to_string(cfg.scenario)) + " scenario forces alpha = " +
         estimation::format_double(*forced));
  }
  if (cfg.scenario == Scenario::Newton && !is_positive(cfg.multiplier)) {
    fail("newton scenario needs positive masses X_j");
  }
}

double residual_bound(const LePageConfig& cfg) {
  const double n = static_cast<double>(cfg.terms);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (is_symmetric(cfg.multiplier)) {
    const auto m2 = std::visit(overloaded{
                                   [](const ConstantMultiplier& m) -> std::optional<double> {
                                     return m.value * m.value;
                                   },
                                   [](const RademacherMultiplier& m) -> std::optional<double> {
                                     return m.magnitude * m.magnitude;
                                   },
                                   [](const models::ModelSpec&) -> std::optional<double> {
                                     return std::nullopt;
                                   },
                               },
                               cfg.multiplier);
    if (!m2) return nan;
    return std::sqrt(*m2 * std::pow(n, 1.0 - 2.0 / cfg.alpha) / (2.0 / cfg.alpha - 1.0));
  }
  const auto m1 = mean_abs(cfg.multiplier);
  if (!m1 || cfg.alpha >= 1.0) return nan;
  return *m1 * std::pow(n, 1.0 - 1.0 / cfg.alpha) / (1.0 / cfg.alpha - 1.0);
}

std::optional<double> stable_scale(const LePageConfig& cfg) {
  if (cfg.alpha >= 1.0 || !is_positive(cfg.multiplier)) return std::nullopt;
  std::optional<double> moment;
  if (const auto* c = std::get_if<ConstantMultiplier>(&cfg.multiplier)) {
    moment = std::pow(c->value, cfg.alpha);
  } else if (const auto* model = std::get_if<models::ModelSpec>(&cfg.multiplier)) {
    moment = model_moment(*model, cfg.alpha);
  }
  if (!moment) return std::nullopt;
  return std::tgamma(1.0 - cfg.alpha) * *moment;
}

LePageDraw simulate_lepage(const LePageConfig& cfg, Rng& rng) {
  validate(cfg);
  const MultiplierDraw multiplier(cfg.multiplier);
  const double value = path_with(cfg, multiplier, {cfg.terms}, rng).front();
  return {value, residual_bound(cfg), cfg.terms};
}

std::vector<double> lepage_path(const LePageConfig& cfg, const std::vector<std::int64_t>& checkpoints,
                                Rng& rng) {
  validate(cfg);
  check_checkpoints(cfg, checkpoints);
  const MultiplierDraw multiplier(cfg.multiplier);
  return path_with(cfg, multiplier, checkpoints, rng);
}

samplers::SampleBatch simulate_batch(const LePageConfig& cfg, std::size_t n, const RngState& rng) {
  validate(cfg);
  if (n < 1) fail("n must be >= 1");
  const MultiplierDraw multiplier(cfg.multiplier);
  const std::vector<std::int64_t> checkpoints{cfg.terms};
  samplers::SampleBatch batch;
  batch.label = "lepage:" + std::string(to_string(cfg.scenario));
  batch.seed = rng.seed;
  batch.stream = rng.stream;
  batch.values = samplers::generate(
      n, rng, [&](Rng& r) { return path_with(cfg, multiplier, checkpoints, r).front(); });
  batch.metadata["scenario"] = std::string(to_string(cfg.scenario));
  batch.metadata["alpha"] = estimation::format_double(cfg.alpha);
  batch.metadata["inverse_alpha"] = estimation::format_double(1.0 / cfg.alpha);
  batch.metadata["terms"] = std::to_string(cfg.terms);
  batch.metadata["residual_bound"] = estimation::format_double(residual_bound(cfg));
  batch.metadata["multiplier"] = describe(cfg.multiplier);
  return batch;
}

samplers::SampleBatch scenario_force(Scenario scenario, const MultiplierLaw& multiplier,
                                     std::size_t n, const RngState& rng,
                                     std::optional<std::int64_t> terms) {
  const auto alpha = scenario_alpha(scenario);
  if (!alpha) fail("scenario_force needs coulomb, newton or basestation");
  const LePageConfig cfg{*alpha, multiplier, terms.value_or(default_terms(scenario)), scenario};
  return simulate_batch(cfg, n, rng);
}

}  // namespace tempertail::lepage
