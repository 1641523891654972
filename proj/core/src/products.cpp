#include "tempertail/products.hpp"

#include <cmath>
#include <numbers>
#include <optional>

#include "tempertail/errors.hpp"

namespace tempertail::products {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

using estimation::format_double;

std::string describe(const CountLaw& count) {
  return std::visit(overloaded{
                        [](const GeometricCount&) { return std::string("geometric"); },
                        [](const TruncGeometricCount& c) {
                          return "trunc-geometric(M=" + std::to_string(c.bound) + ")";
                        },
                    },
                    count);
}

class LogDraw {
 public:
  explicit LogDraw(const PositiveLaw& law) : law_(law) {
    if (const auto* model = std::get_if<models::ModelSpec>(&law)) sampler_.emplace(*model);
  }
  double operator()(Rng& rng) const {
    return std::visit(overloaded{
                          [&](const models::ModelSpec&) { return std::log((*sampler_)(rng)); },
                          [&](const LogNormal& m) { return m.mean + m.sd * rng.normal(); },
                          [](const Degenerate& m) { return std::log(m.value); },
                      },
                      law_);
  }

 private:
  PositiveLaw law_;
  std::optional<samplers::Sampler> sampler_;
};

double draw_count(const ProductConfig& cfg, Rng& rng) {
  return std::visit(overloaded{
                        [&](const GeometricCount&) { return samplers::sample_geometric(cfg.p, rng); },
                        [&](const TruncGeometricCount& c) {
                          if (c.bound == 1) return 1.0;
                          return samplers::sample_trunc_geometric(cfg.p, c.bound, rng);
                        },
                    },
                    cfg.count);
}

}  // namespace

std::string describe(const PositiveLaw& law) {
  return std::visit(overloaded{
                        [](const models::ModelSpec& m) { return m.describe(); },
                        [](const LogNormal& m) {
                          return "lognormal(mean=" + format_double(m.mean) +
                                 ", sd=" + format_double(m.sd) + ")";
                        },
                        [](const Degenerate& m) { return "degenerate(" + format_double(m.value) + ")"; },
                    },
                    law);
}

double log_mean(const PositiveLaw& law) {
  using namespace models;
  constexpr double euler = std::numbers::egamma;
  return std::visit(
      overloaded{
          [](const LogNormal& m) { return m.mean; },
          [](const Degenerate& m) { return std::log(m.value); },
          [&](const ModelSpec& spec) {
            return std::visit(
                overloaded{
                    [](const Pareto& m) { return 1.0 / m.shape; },
                    [&](const Exponential& m) { return std::log(m.scale) - euler; },
                    // log(sigma/Z^2): E log Z^2 = -euler - log 2.
                    [&](const Levy& m) { return std::log(m.sigma) + euler + std::numbers::ln2; },
                    [&](const PositiveStable& m) {
                      return euler * (1.0 / m.alpha - 1.0) + std::log(m.scale) / m.alpha;
                    },
                    [&](const auto&) -> double {
                      throw ValidationError("products: E log X has no closed form for " +
                                            spec.describe() +
                                            "; use pareto, exponential, levy, positive-stable, "
                                            "lognormal or degenerate");
                    },
                },
                spec.params());
          },
      },
      law);
}

void validate(const ProductConfig& cfg) {
  if (!(cfg.p > 0.0 && cfg.p < 1.0)) throw ValidationError("products: p must lie in (0,1)");
  std::visit(overloaded{
                 [](const models::ModelSpec& m) {
                   if (!m.is_positive()) {
                     throw ValidationError("products: multiplier " + m.describe() +
                                           " is not a positive law");
                   }
                 },
                 [](const LogNormal& m) {
                   if (!std::isfinite(m.mean) || !(m.sd >= 0.0) || !std::isfinite(m.sd)) {
                     throw ValidationError("products: lognormal needs finite mean and sd >= 0");
                   }
                 },
                 [](const Degenerate& m) {
                   if (!(m.value > 0.0) || !std::isfinite(m.value)) {
                     throw ValidationError("products: degenerate value must be > 0");
                   }
                 },
             },
             cfg.multiplier);
  if (const auto* c = std::get_if<TruncGeometricCount>(&cfg.count); c && c->bound < 1) {
    throw ValidationError("products: count bound M must be an integer >= 1");
  }
  const double gamma = log_mean(cfg.multiplier);
  if (!std::isfinite(gamma)) throw ValidationError("products: E log X must be finite");
}

samplers::SampleBatch simulate_zp(const ProductConfig& cfg, std::size_t n, const RngState& rng) {
  validate(cfg);
  if (n < 1) throw ValidationError("products: n must be >= 1");
  const LogDraw log_draw(cfg.multiplier);
  samplers::SampleBatch batch;
  batch.label = "products:zp";
  batch.seed = rng.seed;
  batch.stream = rng.stream;
  batch.values = samplers::generate(n, rng, [&](Rng& r) {
    const double count = draw_count(cfg, r);
    double log_sum = 0.0;
    for (double j = 0; j < count; ++j) log_sum += log_draw(r);
    return std::exp(cfg.p * log_sum);
  });
  batch.metadata["multiplier"] = describe(cfg.multiplier);
  batch.metadata["p"] = format_double(cfg.p);
  batch.metadata["count"] = describe(cfg.count);
  batch.metadata["gamma"] = format_double(log_mean(cfg.multiplier));
  return batch;
}

estimation::VerificationReport check_pareto_limit(const ProductConfig& cfg, std::size_t n,
                                                  const RngState& rng, double threshold) {
  validate(cfg);
  const double gamma = log_mean(cfg.multiplier);
  if (!(gamma > 0.0)) {
    throw ValidationError("products: the Pareto limit needs gamma = E log X > 0 (got " +
                          format_double(gamma) + ")");
  }
  ProductConfig geometric = cfg;
  geometric.count = GeometricCount{};
  const auto batch = simulate_zp(geometric, n, rng);
  const double shape = 1.0 / gamma;
  const double d = estimation::ks_distance(batch.values, [&](double x) {
    return x <= 1.0 ? 0.0 : -std::expm1(-shape * std::log(x));
  });
  std::size_t below = 0;
  for (double z : batch.values) below += z < 1.0 ? 1 : 0;
  auto report = estimation::VerificationReport::make("products.pareto-limit", d, threshold);
  report.with("n", static_cast<double>(n))
      .with("seed", static_cast<double>(rng.seed))
      .with("p", cfg.p)
      .with("gamma", gamma)
      .with("shape", shape)
      .with("multiplier", describe(cfg.multiplier))
      .with("mass_below_one", static_cast<double>(below) / static_cast<double>(n));
  return report;
}

samplers::SampleBatch trunc_count_products(const ProductConfig& cfg, std::size_t n,
                                           const RngState& rng) {
  if (!std::holds_alternative<TruncGeometricCount>(cfg.count)) {
    throw ValidationError("products: trunc_count_products needs a trunc-geometric count law");
  }
  auto batch = simulate_zp(cfg, n, rng);
  batch.label = "products:trunc-count";
  return batch;
}

}  // namespace tempertail::products
