#include "tempertail/shortsell.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "tempertail/errors.hpp"
#include "tempertail/special.hpp"

namespace tempertail::shortsell {
namespace {

using models::ModelSpec;

constexpr std::int64_t kDirectTerms = 20'000;
constexpr double kStopBound = 1e-12;
// Beyond this the change of variables x = K/t would overflow; the neglected
// piece is O(t^{1+gamma}) there.
constexpr double kFarTail = 1e200;

/// Order-size weights extended to real arguments, for direct sums and the
/// Euler-Maclaurin remainder.
struct OrderWeights {
  std::function<double(double)> pmf;
  /// Exact P{X > k} at integers k; when empty, callers subtract the direct
  /// terms from 1 as they go.
  std::function<double(std::int64_t)> tail_mass;
  double upper = std::numeric_limits<double>::infinity();
};

OrderWeights order_weights(const ModelSpec& orders) {
  if (const auto* m = orders.as<models::Sibuya>()) {
    const double g = m->gamma;
    return {[g](double x) { return special::sibuya_pmf(g, x); },
            [g](std::int64_t k) { return special::sibuya_survival(g, static_cast<double>(k)); }};
  }
  if (const auto* m = orders.as<models::TruncSibuya>()) {
    const double g = m->gamma;
    const double bound = static_cast<double>(m->bound);
    const double cut = special::sibuya_survival(g, bound);
    const double mass = 1.0 - cut;
    return {[g, mass](double x) { return special::sibuya_pmf(g, x) / mass; },
            [g, cut, mass, bound](std::int64_t k) {
              const double kd = static_cast<double>(k);
              return kd >= bound ? 0.0 : (special::sibuya_survival(g, kd) - cut) / mass;
            },
            bound};
  }
  if (const auto* m = orders.as<models::TemperedSibuya>()) {
    const double g = m->gamma;
    const double log_a = std::log(m->tilt);
    const double norm = -std::expm1(g * std::log1p(-m->tilt));
    return {[g, log_a, norm](double x) { return special::sibuya_pmf(g, x) * std::exp(x * log_a) / norm; },
            {}};
  }
  throw ValidationError("shortsell: orders must be sibuya, trunc-sibuya or tempered-sibuya");
}

// Euler-Maclaurin estimate of Sum_{k=K+1}^{upper} f(k).
double euler_maclaurin_tail(const std::function<double(double)>& f, double from, double upper) {
  const double h = std::max(1e-3 * from, 1e-2);
  auto derivative = [&](double x) { return (f(x + h) - f(x - h)) / (2.0 * h); };
  if (std::isinf(upper)) {
    auto integrand = [&](double t) {
      const double x = from / t;
      if (!(x < kFarTail)) return 0.0;
      return f(x) * x / t;
    };
    const double integral = special::integrate_singular(integrand, 0.0, 1.0, 1e-13);
    return integral - f(from) / 2.0 - derivative(from) / 12.0;
  }
  const double integral = special::integrate(f, from, upper, 1e-13);
  return integral + (f(upper) - f(from)) / 2.0 + (derivative(upper) - derivative(from)) / 12.0;
}

/// Sum_k pmf(k) L_P(s k).
double lpx_series(double s, const ModelSpec& prices, const OrderWeights& w) {
  auto lt = [&](double x) { return models::laplace_transform(prices, s * x); };
  const std::int64_t last =
      static_cast<std::int64_t>(std::min<double>(w.upper, static_cast<double>(kDirectTerms)));
  double sum = 0.0;
  double mass = 1.0;
  std::int64_t k = 1;
  for (; k <= last; ++k) {
    const double g = lt(static_cast<double>(k));
    const double weight = w.pmf(static_cast<double>(k));
    sum += weight * g;
    mass = w.tail_mass ? w.tail_mass(k) : mass - weight;
    // Remaining terms are at most P{X > k} L_P(s k).
    if (mass * g < kStopBound) break;
  }
  const double from = static_cast<double>(std::min(k, last));
  if (from >= w.upper) return sum;
  return sum + euler_maclaurin_tail([&](double x) { return w.pmf(x) * lt(x); }, from, w.upper);
}

/// Sum_k pmf(k) (1 - L_P(s k)); the remainder is P{X > K} minus the
/// remainder of the L_P series.
double lpx_complement_series(double s, const ModelSpec& prices, const OrderWeights& w) {
  auto lt = [&](double x) { return models::laplace_transform(prices, s * x); };
  const std::int64_t last =
      static_cast<std::int64_t>(std::min<double>(w.upper, static_cast<double>(kDirectTerms)));
  double sum = 0.0;
  std::int64_t k = 1;
  double mass = 1.0;
  for (; k <= last; ++k) {
    const double weight = w.pmf(static_cast<double>(k));
    sum += weight * models::laplace_complement(prices, s * static_cast<double>(k));
    mass = w.tail_mass ? w.tail_mass(k) : mass - weight;
    if (mass < 1e-17 * sum) break;
  }
  const double from = static_cast<double>(std::min(k, last));
  if (from >= w.upper || mass < 1e-17 * sum) return sum;
  const double lt_tail = euler_maclaurin_tail([&](double x) { return w.pmf(x) * lt(x); }, from, w.upper);
  return sum + (mass - lt_tail);
}

void require_s(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw ValidationError("shortsell: s must be > 0");
}

double ls_from_complement(double c, double p) { return p * (1.0 - c) / (p + (1.0 - p) * c); }
double ls_complement_from_complement(double c, double p) { return c / (p + (1.0 - p) * c); }

}  // namespace

void validate(const ShortSellConfig& cfg) {
  if (!(cfg.p > 0.0 && cfg.p <= 1.0)) throw ValidationError("shortsell: p must lie in (0,1]");
  order_weights(cfg.orders);
  if (!cfg.prices.is_positive() || cfg.prices.is_discrete() ||
      !models::supports(cfg.prices, models::TransformKind::LT)) {
    throw ValidationError("shortsell: prices must be a positive continuous law with a Laplace "
                          "transform (levy, inverse-gaussian, positive-stable, "
                          "tempered-positive-stable, pareto, exponential)");
  }
  if (!(cfg.threshold >= 0.0) || !std::isfinite(cfg.threshold)) {
    throw ValidationError("shortsell: threshold P* must be finite and >= 0");
  }
}

bool has_closed_form(const ShortSellConfig& cfg) {
  return cfg.prices.as<models::Exponential>() != nullptr && cfg.orders.as<models::Sibuya>() != nullptr;
}

double analytic_lpx(double s, const ModelSpec& prices, const ModelSpec& orders) {
  require_s(s);
  return lpx_series(s, prices, order_weights(orders));
}

double analytic_lpx_complement(double s, const ModelSpec& prices, const ModelSpec& orders) {
  require_s(s);
  return lpx_complement_series(s, prices, order_weights(orders));
}

double lpx_closed_form_complement(double s, double a, double gamma) {
  require_s(s);
  models::validate(models::Exponential{a});
  models::validate(models::Sibuya{gamma});
  const double x = 1.0 / (a * s);
  return std::tgamma(1.0 + gamma) * special::gamma_ratio(1.0 + x, gamma);
}

double lpx_closed_form(double s, double a, double gamma) {
  return 1.0 - lpx_closed_form_complement(s, a, gamma);
}

double analytic_ls(double s, const ShortSellConfig& cfg) {
  validate(cfg);
  return ls_from_complement(analytic_lpx_complement(s, cfg.prices, cfg.orders), cfg.p);
}

double analytic_ls_complement(double s, const ShortSellConfig& cfg) {
  validate(cfg);
  return ls_complement_from_complement(analytic_lpx_complement(s, cfg.prices, cfg.orders), cfg.p);
}

namespace {
double closed_complement(double s, const ShortSellConfig& cfg) {
  validate(cfg);
  if (!has_closed_form(cfg)) {
    throw ValidationError("shortsell: the closed form needs exponential prices and sibuya orders");
  }
  return lpx_closed_form_complement(s, cfg.prices.as<models::Exponential>()->scale,
                                    cfg.orders.as<models::Sibuya>()->gamma);
}
}  // namespace

double closed_form_ls(double s, const ShortSellConfig& cfg) {
  return ls_from_complement(closed_complement(s, cfg), cfg.p);
}

double closed_form_ls_complement(double s, const ShortSellConfig& cfg) {
  return ls_complement_from_complement(closed_complement(s, cfg), cfg.p);
}

std::optional<double> tail_constant(const ShortSellConfig& cfg) {
  validate(cfg);
  if (!has_closed_form(cfg)) return std::nullopt;
  const double a = cfg.prices.as<models::Exponential>()->scale;
  const double gamma = cfg.orders.as<models::Sibuya>()->gamma;
  return std::pow(a, gamma) * std::tgamma(1.0 + gamma) / cfg.p;
}

namespace {
samplers::SampleBatch simulate(const ShortSellConfig& cfg, std::size_t n, const RngState& rng,
                               double threshold, std::string label) {
  validate(cfg);
  if (n < 1) throw ValidationError("shortsell: n must be >= 1");
  const samplers::Sampler orders(cfg.orders);
  const samplers::Sampler prices(cfg.prices);
  samplers::SampleBatch batch;
  batch.label = std::move(label);
  batch.seed = rng.seed;
  batch.stream = rng.stream;
  batch.values = samplers::generate(n, rng, [&](Rng& r) {
    const double count = cfg.p == 1.0 ? 1.0 : samplers::sample_geometric(cfg.p, r);
    double total = 0.0;
    for (double j = 0; j < count; ++j) {
      const double price = prices(r);
      total += (price - threshold) * orders(r);
    }
    return total;
  });
  batch.metadata["p"] = estimation::format_double(cfg.p);
  batch.metadata["orders"] = cfg.orders.describe();
  batch.metadata["prices"] = cfg.prices.describe();
  batch.metadata["threshold"] = estimation::format_double(threshold);
  return batch;
}
}  // namespace

samplers::SampleBatch simulate_revenue(const ShortSellConfig& cfg, std::size_t n,
                                       const RngState& rng) {
  return simulate(cfg, n, rng, 0.0, "shortsell:revenue");
}

samplers::SampleBatch simulate_profit_bound(const ShortSellConfig& cfg, std::size_t n,
                                            const RngState& rng) {
  return simulate(cfg, n, rng, cfg.threshold, "shortsell:profit-bound");
}

TailReport tail_report(const ShortSellConfig& cfg, std::size_t n, const RngState& rng,
                       double tolerance) {
  if (n < kTailReportMinN) throw ValidationError("shortsell: tail_report needs n >= 10^5");
  const auto batch = simulate_revenue(cfg, n, rng);
  TailReport report;
  report.hill = estimation::hill(batch.values);
  report.curvature = estimation::survival_curvature(batch.values);
  report.tolerance = tolerance;
  report.analytic_tail_constant = tail_constant(cfg);
  if (const auto* m = cfg.orders.as<models::Sibuya>(); m && m->gamma < 1.0) {
    report.expected_order = m->gamma;
    report.pass = std::abs(report.hill.index - m->gamma) <= tolerance &&
                  report.curvature.classification == estimation::TailClass::PowerLike;
  } else {
    report.pass = report.curvature.classification == estimation::TailClass::LighterThanPower;
  }
  return report;
}

}  // namespace tempertail::shortsell
