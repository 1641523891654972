#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tempertail/models.hpp"
#include "tempertail/rng.hpp"

namespace tempertail::samplers {

/// A seeded set of draws. `model` is empty for batches of derived quantities
/// (LePage sums, products, short-sell revenue); `label` always names the source.
struct SampleBatch {
  std::string label;
  std::optional<models::ModelSpec> model;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::vector<double> values;
  std::map<std::string, std::string> metadata;

  std::size_t n() const { return values.size(); }
};

/// Fill n values with draw(rng), chunk c using rng = state.substream(c).
/// Deterministic for a given (state, n) regardless of thread count.
std::vector<double> generate(std::size_t n, const RngState& state,
                             const std::function<double(Rng&)>& draw);

// ---------------------------------------------------------------------------
// Per-law samplers.
// ---------------------------------------------------------------------------

/// sigma / Z^2.
double sample_levy(double sigma, Rng& rng);
/// Michael, Schucany and Haas transform with one uniform acceptance step.
double sample_ig(double lambda, double mu, Rng& rng);
/// Kanter's representation of the LT exp(-A s^alpha) law.
double sample_positive_stable(double alpha, double scale, Rng& rng);
/// Z * A^{1/2}, A ~ positive stable(alpha, 1).
double sample_subgaussian(double alpha, Rng& rng);
/// Chambers-Mallows-Stuck; CF exp(-c |t|^beta), beta in (0,2].
double sample_symmetric_stable(double beta, double c, Rng& rng);
/// mu + T1 - T2 with T1, T2 tilted positive stable. Only alpha < 1.
double sample_cts(const models::Cts& params, Rng& rng);

/// Survival inversion on P{T > 2k-1} = C(2k,k) 4^{-k}.
double sample_walk_fpt(Rng& rng);
/// Direct simulation of the walk; throws SamplingError after 10^7 steps.
double sample_biased_walk_fpt(double p, Rng& rng);
/// min(T, 2[M/2]-1) with T the unbiased first-passage time.
double sample_trunc_walk_fpt(std::int64_t budget, Rng& rng);
inline constexpr std::int64_t kBiasedWalkStepCap = 10'000'000;

/// Sequential product for small k, then survival inversion.
double sample_sibuya(double gamma, Rng& rng);
double sample_geometric(double p, Rng& rng);
double sample_trunc_geometric(double p, std::int64_t bound, Rng& rng);
double sample_pareto(double shape, Rng& rng);
double sample_exponential(double scale, Rng& rng);

/// Inverse-CDF table over {1..K} built from unnormalized weights.
class DiscreteTable {
 public:
  explicit DiscreteTable(const std::vector<double>& weights);
  /// Returns k in {1..K}.
  double draw(double u) const;
  std::size_t size() const { return cumulative_.size(); }
  /// Cumulative mass of the first k atoms, normalized.
  double cumulative(std::size_t k) const { return k == 0 ? 0.0 : cumulative_[k - 1]; }

 private:
  std::vector<double> cumulative_;
};

/// Largest table built for truncated or tempered Sibuya order laws.
inline constexpr std::int64_t kMaxTableSize = 1'000'000;

/// A sampler prepared for one model; builds any lookup tables once.
class Sampler {
 public:
  explicit Sampler(models::ModelSpec model);
  double operator()(Rng& rng) const;
  const models::ModelSpec& model() const { return model_; }

 private:
  struct Tables;
  models::ModelSpec model_;
  std::shared_ptr<const Tables> tables_;
};

/// n i.i.d. draws of the model's exact law.
SampleBatch sample(const models::ModelSpec& model, std::size_t n, const RngState& rng);

}  // namespace tempertail::samplers
