#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <variant>

#include "tempertail/estimation.hpp"
#include "tempertail/models.hpp"
#include "tempertail/rng.hpp"
#include "tempertail/samplers.hpp"

namespace tempertail::products {

/// log X ~ Gaussian(mean, sd); E log X = mean.
struct LogNormal {
  double mean = 1.0;
  double sd = 1.0;
};
/// X identically equal to value > 0.
struct Degenerate {
  double value = std::numbers::e;
};
/// Positive multiplier law. Model laws must have a closed-form E log X:
/// Pareto, Exponential, Levy, PositiveStable.
using PositiveLaw = std::variant<models::ModelSpec, LogNormal, Degenerate>;

std::string describe(const PositiveLaw& law);
/// gamma = E log X. Throws ValidationError for laws without a closed form.
double log_mean(const PositiveLaw& law);

/// P{nu = k} = p (1-p)^{k-1}, k >= 1.
struct GeometricCount {};
/// Geometric conditioned on {1..M}; M = 1 makes nu identically 1.
struct TruncGeometricCount {
  std::int64_t bound = 2;
};
using CountLaw = std::variant<GeometricCount, TruncGeometricCount>;

/// Z_p = prod_{j <= nu} X_j^p with nu drawn from the count law at parameter p.
struct ProductConfig {
  PositiveLaw multiplier = LogNormal{};
  double p = 0.5;
  CountLaw count = GeometricCount{};
};

void validate(const ProductConfig& cfg);

/// n realizations of Z_p, accumulated as exp(p Sum log X_j).
samplers::SampleBatch simulate_zp(const ProductConfig& cfg, std::size_t n, const RngState& rng);

/// KS distance between simulated Z_p (geometric count) and the Pareto CDF
/// 1 - x^{-1/gamma} on x > 1. Passes when the distance is below `threshold`.
/// Throws ValidationError when gamma <= 0. Metadata records the fraction of
/// draws below 1.
estimation::VerificationReport check_pareto_limit(const ProductConfig& cfg, std::size_t n,
                                                  const RngState& rng, double threshold = 0.05);

/// simulate_zp for a truncated-geometric count law.
samplers::SampleBatch trunc_count_products(const ProductConfig& cfg, std::size_t n,
                                           const RngState& rng);

}  // namespace tempertail::products
