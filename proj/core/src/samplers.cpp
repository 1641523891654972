#include "tempertail/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <variant>

#include "tempertail/errors.hpp"
#include "tempertail/parallel.hpp"
#include "tempertail/special.hpp"
#include "tempertail/tempering.hpp"

namespace tempertail::samplers {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

using std::numbers::pi;

// Sibuya draws below this use the running product instead of the gamma ratio.
constexpr int kSibuyaLinearSteps = 16;

}  // namespace

std::vector<double> generate(std::size_t n, const RngState& state,
                             const std::function<double(Rng&)>& draw) {
  std::vector<double> values(n);
  for_each_chunk(n, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    Rng rng = state.substream(chunk);
    for (std::size_t i = begin; i < end; ++i) values[i] = draw(rng);
  });
  return values;
}

double sample_levy(double sigma, Rng& rng) {
  double z = 0.0;
  while (z == 0.0) z = rng.normal();
  return sigma / (z * z);
}

double sample_ig(double lambda, double mu, Rng& rng) {
  const double z = rng.normal();
  const double y = z * z;
  // mu + mu^2 y/(2 lambda) - mu/(2 lambda) sqrt(4 mu lambda y + mu^2 y^2), rationalized.
  const double root = std::sqrt(4.0 * mu * lambda * y + mu * mu * y * y);
  const double x = mu - 2.0 * mu * mu * y / (mu * y + root);
  if (x <= 0.0) return mu * mu / std::max(x, std::numeric_limits<double>::min());
  return rng.uniform() <= mu / (mu + x) ? x : mu * mu / x;
}

double sample_positive_stable(double alpha, double scale, Rng& rng) {
  const double theta = pi * rng.uniform();
  const double e = rng.exponential();
  const double q = 1.0 - alpha;
  const double log_x = std::log(scale) / alpha + std::log(std::sin(alpha * theta)) -
                       std::log(std::sin(theta)) / alpha +
                       (q / alpha) * (std::log(std::sin(q * theta)) - std::log(e));
  return std::exp(log_x);
}

double sample_subgaussian(double alpha, Rng& rng) {
  const double a = sample_positive_stable(alpha, 1.0, rng);
  return rng.normal() * std::sqrt(a);
}

double sample_symmetric_stable(double beta, double c, Rng& rng) {
  const double v = pi * (rng.uniform() - 0.5);
  const double w = rng.exponential();
  const double unit = beta == 1.0
                          ? std::tan(v)
                          : std::sin(beta * v) / std::pow(std::cos(v), 1.0 / beta) *
                                std::pow(std::cos((1.0 - beta) * v) / w, (1.0 - beta) / beta);
  return std::pow(c, 1.0 / beta) * unit;
}

double sample_cts(const models::Cts& params, Rng& rng) {
  if (params.alpha > 1.0) {
    throw SamplingError("cts: sampling is implemented for alpha < 1 only");
  }
  const double g = std::tgamma(-params.alpha);
  double value = params.mu;
  if (params.c1 > 0.0) {
    value += tempering::tilt_sampler(params.alpha, -params.c1 * g, params.lambda_plus, rng);
  }
  if (params.c2 > 0.0) {
    value -= tempering::tilt_sampler(params.alpha, -params.c2 * g, params.lambda_minus, rng);
  }
  return value;
}

double sample_walk_fpt(Rng& rng) {
  const double u = rng.uniform();
  const double k = special::invert_survival(special::walk_fpt_survival, u);
  return 2.0 * k - 1.0;
}

double sample_biased_walk_fpt(double p, Rng& rng) {
  std::int64_t position = 0;
  for (std::int64_t step = 1; step <= kBiasedWalkStepCap; ++step) {
    position += rng.uniform() < p ? 1 : -1;
    if (position == 1) return static_cast<double>(step);
  }
  throw SamplingError("biased-walk-fpt: no passage within 10^7 steps");
}

double sample_trunc_walk_fpt(std::int64_t budget, Rng& rng) {
  const double top = static_cast<double>(budget / 2);
  const double u = rng.uniform();
  // P{T >= 2K-1} = S(K-1): everything from there on is lumped at 2K-1.
  if (u <= special::walk_fpt_survival(top - 1.0)) return 2.0 * top - 1.0;
  const double k = special::invert_survival(special::walk_fpt_survival, u);
  return 2.0 * std::min(k, top) - 1.0;
}

double sample_sibuya(double gamma, Rng& rng) {
  const double u = rng.uniform();
  double survival = 1.0;
  for (int k = 1; k <= kSibuyaLinearSteps; ++k) {
    survival *= 1.0 - gamma / k;
    if (survival < u) return k;
  }
  auto tail = [gamma](double k) { return special::sibuya_survival(gamma, k); };
  // S(k) is just below k^{-gamma} / Gamma(1-gamma), so the root of that
  // approximation sits at most a few integers above the answer.
  const double guess = std::pow(u * std::tgamma(1.0 - gamma), -1.0 / gamma);
  double lower = kSibuyaLinearSteps;
  if (std::isfinite(guess) && guess > lower + 8.0) {
    const double start = std::floor(guess * (1.0 - 1e-9)) - 4.0;
    if (start > lower && tail(start) >= u) lower = start;
  }
  return special::invert_survival(tail, u, lower);
}

double sample_geometric(double p, Rng& rng) {
  const double k = std::ceil(std::log(rng.uniform()) / std::log1p(-p));
  return std::max(1.0, k);
}

double sample_trunc_geometric(double p, std::int64_t bound, Rng& rng) {
  const double log_q = std::log1p(-p);
  const double m = static_cast<double>(bound);
  // Invert 1 - q^k = U (1 - q^M).
  const double k = std::ceil(std::log1p(rng.uniform() * std::expm1(m * log_q)) / log_q);
  return std::clamp(k, 1.0, m);
}

double sample_pareto(double shape, Rng& rng) {
  return std::exp(-std::log(rng.uniform()) / shape);
}

double sample_exponential(double scale, Rng& rng) { return scale * rng.exponential(); }

DiscreteTable::DiscreteTable(const std::vector<double>& weights) {
  if (weights.empty()) throw ValidationError("discrete table needs at least one weight");
  cumulative_.resize(weights.size());
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] >= 0.0)) throw ValidationError("discrete table weights must be >= 0");
    total += weights[i];
    cumulative_[i] = total;
  }
  if (!(total > 0.0)) throw ValidationError("discrete table weights sum to zero");
  for (double& c : cumulative_) c /= total;
  cumulative_.back() = 1.0;
}

double DiscreteTable::draw(double u) const {
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  const auto index = std::min<std::ptrdiff_t>(it - cumulative_.begin(),
                                              static_cast<std::ptrdiff_t>(size()) - 1);
  return static_cast<double>(index + 1);
}

// ---------------------------------------------------------------------------
// Prepared sampler
// ---------------------------------------------------------------------------

struct Sampler::Tables {
  std::optional<DiscreteTable> table;
  // Tempered Sibuya only: probability that the draw falls in the table, and
  // the last tabulated atom.
  double table_mass = 1.0;
  double table_end = 0.0;
};

namespace {

// gamma/k prod_{i<k}(1 - gamma/i), k = 1..count.
std::vector<double> sibuya_weights(double gamma, std::int64_t count, double tilt = 1.0) {
  std::vector<double> weights;
  weights.reserve(static_cast<std::size_t>(count));
  double pmf = gamma;
  double power = tilt;
  for (std::int64_t k = 1; k <= count; ++k) {
    weights.push_back(pmf * power);
    pmf *= (static_cast<double>(k) - gamma) / static_cast<double>(k + 1);
    power *= tilt;
  }
  return weights;
}

}  // namespace

Sampler::Sampler(models::ModelSpec model) : model_(std::move(model)) {
  auto tables = std::make_shared<Tables>();
  if (const auto* m = model_.as<models::TruncSibuya>()) {
    if (m->bound <= kMaxTableSize) tables->table.emplace(sibuya_weights(m->gamma, m->bound));
  } else if (const auto* m = model_.as<models::TemperedSibuya>()) {
    if (m->tilt < 1.0) {
      const double norm = -std::expm1(m->gamma * std::log1p(-m->tilt));
      std::vector<double> weights;
      double pmf = m->gamma, power = m->tilt, sum = 0.0;
      for (std::int64_t k = 1; k <= kMaxTableSize; ++k) {
        const double w = pmf * power;
        weights.push_back(w);
        sum += w;
        // Remaining mass is at most w a/(1-a).
        if (w * m->tilt / (1.0 - m->tilt) < 1e-18 * norm) break;
        pmf *= (static_cast<double>(k) - m->gamma) / static_cast<double>(k + 1);
        power *= m->tilt;
      }
      tables->table_end = static_cast<double>(weights.size());
      tables->table_mass =
          static_cast<std::int64_t>(weights.size()) == kMaxTableSize ? std::min(1.0, sum / norm)
                                                                     : 1.0;
      tables->table.emplace(weights);
    }
  }
  tables_ = std::move(tables);
}

double Sampler::operator()(Rng& rng) const {
  using namespace models;
  return std::visit(
      overloaded{
          [&](const Levy& m) { return sample_levy(m.sigma, rng); },
          [&](const InverseGaussian& m) { return sample_ig(m.lambda, m.mu, rng); },
          [&](const PositiveStable& m) { return sample_positive_stable(m.alpha, m.scale, rng); },
          [&](const TemperedPositiveStable& m) {
            return tempering::tilt_sampler(m.alpha, m.scale, m.tilt, rng);
          },
          [&](const SubGaussian& m) { return sample_subgaussian(m.alpha, rng); },
          [&](const TemperedSubGaussian& m) {
            return tempering::subgaussian_v1_sampler(m.alpha, m.tilt, rng);
          },
          [&](const TruncSubGaussian& m) {
            return tempering::subgaussian_v3_sampler(m.alpha, m.bound, rng);
          },
          [&](const TemperedStableMix& m) {
            return tempering::subgaussian_v2_sampler(m.alpha, m.beta, m.tilt, rng);
          },
          [&](const Cts& m) { return sample_cts(m, rng); },
          [&](const WalkFpt&) { return sample_walk_fpt(rng); },
          [&](const BiasedWalkFpt& m) { return sample_biased_walk_fpt(m.p, rng); },
          [&](const TruncWalkFpt& m) { return sample_trunc_walk_fpt(m.budget, rng); },
          [&](const Sibuya& m) { return sample_sibuya(m.gamma, rng); },
          [&](const TruncSibuya& m) {
            const double u = rng.uniform();
            if (tables_->table) return tables_->table->draw(u);
            const double tail = special::sibuya_survival(m.gamma, static_cast<double>(m.bound));
            return special::invert_survival(
                [&](double k) { return special::sibuya_survival(m.gamma, k); },
                1.0 - u * (1.0 - tail));
          },
          [&](const TemperedSibuya& m) {
            if (!tables_->table) return sample_sibuya(m.gamma, rng);
            const double u = rng.uniform();
            if (u < tables_->table_mass) return tables_->table->draw(u / tables_->table_mass);
            // Beyond the table: Sibuya conditioned on X > K, accepted with
            // probability a^{k-K-1}.
            const double end = tables_->table_end;
            const double tail = special::sibuya_survival(m.gamma, end);
            for (;;) {
              const double k = special::invert_survival(
                  [&](double x) { return special::sibuya_survival(m.gamma, x); },
                  rng.uniform() * tail, end);
              if (rng.uniform() < std::exp((k - end - 1.0) * std::log(m.tilt))) return k;
            }
          },
          [&](const Geometric& m) { return sample_geometric(m.p, rng); },
          [&](const TruncGeometric& m) { return sample_trunc_geometric(m.p, m.bound, rng); },
          [&](const Pareto& m) { return sample_pareto(m.shape, rng); },
          [&](const Exponential& m) { return sample_exponential(m.scale, rng); },
      },
      model_.params());
}

SampleBatch sample(const models::ModelSpec& model, std::size_t n, const RngState& rng) {
  if (n < 1) throw ValidationError("sample: n must be >= 1");
  const Sampler sampler(model);
  SampleBatch batch;
  batch.label = model.describe();
  batch.model = model;
  batch.seed = rng.seed;
  batch.stream = rng.stream;
  batch.values = generate(n, rng, [&](Rng& r) { return sampler(r); });
  batch.metadata["model"] = model.describe();
  batch.metadata["rng"] = std::string(Rng::kAlgorithm);
  return batch;
}

}  // namespace tempertail::samplers
