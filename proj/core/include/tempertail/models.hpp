#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

namespace tempertail::models {

using complex = std::complex<double>;

// ---------------------------------------------------------------------------
// Model parameters. One struct per law; ranges are enforced by ModelSpec.
// ---------------------------------------------------------------------------

/// One-sided 1/2-stable law, density sqrt(sigma/(2 pi x^3)) exp(-sigma/(2x)).
/// sigma is the same scale that appears as b in exp(-sqrt(-2 b i t)).
struct Levy {
  double sigma = 1.0;
  bool operator==(const Levy&) const = default;
};
/// First passage of drifted Brownian motion; lambda > 0, mean mu > 0.
struct InverseGaussian {
  double lambda = 1.0;
  double mu = 1.0;
  bool operator==(const InverseGaussian&) const = default;
};
/// Positive stable law with Laplace transform exp(-A s^alpha), alpha in (0,1).
struct PositiveStable {
  double alpha = 0.5;
  double scale = 1.0;
  bool operator==(const PositiveStable&) const = default;
};
/// Exponentially tilted positive stable: LT exp(-A (s+a)^alpha + A a^alpha).
struct TemperedPositiveStable {
  double alpha = 0.5;
  double scale = 1.0;
  double tilt = 0.0;
  bool operator==(const TemperedPositiveStable&) const = default;
};
/// X * A^{1/2}, X standard Gaussian, A positive stable with LT exp(-s^alpha).
struct SubGaussian {
  double alpha = 0.5;
  bool operator==(const SubGaussian&) const = default;
};
/// Sub-Gaussian product with A exponentially tilted by a.
struct TemperedSubGaussian {
  double alpha = 0.5;
  double tilt = 0.0;
  bool operator==(const TemperedSubGaussian&) const = default;
};
/// Sub-Gaussian product with A replaced by min(A, M).
struct TruncSubGaussian {
  double alpha = 0.5;
  double bound = 1.0;
  bool operator==(const TruncSubGaussian&) const = default;
};
/// Y * B_a^{1/beta}: Y symmetric beta-stable with CF exp(-c|t|^beta),
/// c = 2^{-alpha/gamma}, and B_a a tilted gamma-stable, gamma = 2 alpha / beta.
/// With tilt 0 this is the SubGaussian{alpha} law.
struct TemperedStableMix {
  double alpha = 0.4;
  double beta = 1.6;
  double tilt = 0.0;
  bool operator==(const TemperedStableMix&) const = default;
};
/// Classical tempered stable law (characteristic function only).
struct Cts {
  double c1 = 1.0;
  double c2 = 1.0;
  double lambda_plus = 1.0;
  double lambda_minus = 1.0;
  double alpha = 0.5;
  double mu = 0.0;
  bool operator==(const Cts&) const = default;
};
/// First passage through +1 of the symmetric +-1 walk.
struct WalkFpt {
  bool operator==(const WalkFpt&) const = default;
};
/// First passage through +1 when a right step has probability p in (1/2,1).
struct BiasedWalkFpt {
  double p = 0.75;
  bool operator==(const BiasedWalkFpt&) const = default;
};
/// Symmetric-walk first passage with a move budget M >= 2; mass beyond the
/// last affordable odd time 2[M/2]-1 is lumped there.
struct TruncWalkFpt {
  std::int64_t budget = 2;
  bool operator==(const TruncWalkFpt&) const = default;
};
/// P{X=k} = gamma/k prod_{i<k}(1 - gamma/i), PGF 1-(1-z)^gamma.
struct Sibuya {
  double gamma = 0.5;
  bool operator==(const Sibuya&) const = default;
};
/// Sibuya conditioned on X <= M.
struct TruncSibuya {
  double gamma = 0.5;
  std::int64_t bound = 1;
  bool operator==(const TruncSibuya&) const = default;
};
/// PGF (1-(1-az)^gamma) / (1-(1-a)^gamma), a in (0,1].
struct TemperedSibuya {
  double gamma = 0.5;
  double tilt = 1.0;
  bool operator==(const TemperedSibuya&) const = default;
};
/// P{X=k} = p (1-p)^{k-1}, k >= 1.
struct Geometric {
  double p = 0.5;
  bool operator==(const Geometric&) const = default;
};
/// Geometric conditioned on X <= M, M > 1.
struct TruncGeometric {
  double p = 0.5;
  std::int64_t bound = 2;
  bool operator==(const TruncGeometric&) const = default;
};
/// P{X > x} = x^{-a} on x > 1.
struct Pareto {
  double shape = 1.0;
  bool operator==(const Pareto&) const = default;
};
/// Exponential with mean a; LT 1/(1+as).
struct Exponential {
  double scale = 1.0;
  bool operator==(const Exponential&) const = default;
};

using Params = std::variant<Levy, InverseGaussian, PositiveStable, TemperedPositiveStable,
                            SubGaussian, TemperedSubGaussian, TruncSubGaussian,
                            TemperedStableMix, Cts, WalkFpt, BiasedWalkFpt, TruncWalkFpt,
                            Sibuya, TruncSibuya, TemperedSibuya, Geometric, TruncGeometric,
                            Pareto, Exponential>;

/// Throws ValidationError naming the violated range.
void validate(const Params& params);

/// A validated model description. Construction rejects out-of-range parameters.
class ModelSpec {
 public:
  ModelSpec(Params params);  // NOLINT(google-explicit-constructor)
  template <class T>
    requires std::is_constructible_v<Params, T>
  ModelSpec(T params) : ModelSpec(Params(std::move(params))) {}  // NOLINT

  const Params& params() const { return params_; }
  template <class T>
  const T* as() const {
    return std::get_if<T>(&params_);
  }

  /// Registry name, e.g. "levy", "trunc-sibuya".
  std::string_view name() const;
  /// Name plus parameters, e.g. "sibuya(gamma=0.5)".
  std::string describe() const;
  /// Integer-valued law.
  bool is_discrete() const;
  /// Support contained in (0, inf).
  bool is_positive() const;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;

 private:
  Params params_;
};

/// Names of every variant, in Params order.
std::span<const std::string_view> model_names();

// ---------------------------------------------------------------------------
// Transform queries.
// ---------------------------------------------------------------------------

enum class TransformKind { CF, PGF, LT, PDF, PMF };

std::string_view to_string(TransformKind kind);
TransformKind parse_transform_kind(std::string_view text);

/// Evaluation request. Points must be non-empty and finite; PGF points lie in
/// [0,1], LT points are >= 0, PMF points are integers >= 1.
struct TransformQuery {
  TransformKind kind;
  std::vector<double> points;

  TransformQuery(TransformKind kind, std::vector<double> points);
};

struct TransformResult {
  TransformKind kind;
  std::vector<complex> values;
};

/// Kinds that evaluate() supports for this model.
std::vector<TransformKind> supported_kinds(const ModelSpec& model);
bool supports(const ModelSpec& model, TransformKind kind);

/// Dispatch to the closed-form evaluator. Throws UnsupportedTransform for
/// pairs outside supported_kinds(), ValidationError for points outside the
/// model's domain (e.g. a PDF point <= 0 for a positive law).
///
/// Supported pairs:
///   CF  every law except Pareto
///   PGF discrete laws (walk, Sibuya and geometric families)
///   LT  Levy, InverseGaussian, PositiveStable, TemperedPositiveStable,
///       Pareto, Exponential, and every discrete law
///   PDF Levy, InverseGaussian, Pareto, Exponential
///   PMF discrete laws
TransformResult evaluate(const ModelSpec& model, const TransformQuery& query);

/// Single-point conveniences over evaluate().
complex characteristic_function(const ModelSpec& model, double t);
double laplace_transform(const ModelSpec& model, double s);
/// 1 - LT(s), computed without cancellation for small s.
double laplace_complement(const ModelSpec& model, double s);
double pgf(const ModelSpec& model, double z);
double pmf(const ModelSpec& model, std::int64_t k);
/// P{X > k} for discrete laws.
double survival(const ModelSpec& model, double k);
/// Distribution function where a closed form or a one-dimensional integral
/// exists: Levy, InverseGaussian, PositiveStable, Pareto, Exponential, and the
/// discrete laws. Throws UnsupportedTransform otherwise.
double cdf(const ModelSpec& model, double x);
/// Whether x lies in the support (positivity, integrality, odd times, bounds).
bool in_support(const ModelSpec& model, double x);

// ---------------------------------------------------------------------------
// Closed-form evaluators. Every complex power and root is principal-branch.
// ---------------------------------------------------------------------------

complex levy_cf(double t, double sigma);
double levy_lt(double s, double sigma);
double levy_pdf(double x, double sigma);
/// erfc(sqrt(sigma/(2x))).
double levy_cdf(double x, double sigma);

/// exp((lambda/mu)(1 - sqrt(1 - 2 i t mu^2 / lambda))); lambda = sigma gives
/// the tilted-Levy form.
complex ig_cf(double t, double lambda, double mu);
double ig_lt(double s, double lambda, double mu);
double ig_pdf(double x, double lambda, double mu);
double ig_cdf(double x, double lambda, double mu);

complex cts_cf(double u, const Cts& params);

double positive_stable_lt(double s, double alpha, double scale);
double tempered_positive_stable_lt(double s, double alpha, double scale, double tilt);
complex positive_stable_cf(double t, double alpha, double scale);
complex tempered_positive_stable_cf(double t, double alpha, double scale, double tilt);
/// CDF of the LT exp(-A s^alpha) law from Kanter's integral representation.
double positive_stable_cdf(double x, double alpha, double scale);

double subgaussian_cf(double t, double alpha);
double tempered_subgaussian_cf(double t, double alpha, double tilt);
/// E exp(-u min(A,M)), u = t^2/2, as a double integral over Kanter's
/// representation of A.
double trunc_subgaussian_cf(double t, double alpha, double bound);
double tempered_stable_mix_cf(double t, double alpha, double beta, double tilt);
/// c = 2^{-alpha/gamma} with gamma = 2 alpha / beta.
double stable_mix_scale(double alpha, double beta);

double walk_fpt_pgf(double z);
double biased_walk_fpt_pgf(double z, double p);
double truncated_walk_pgf(double z, std::int64_t budget);
double walk_fpt_pmf(std::int64_t k);
double biased_walk_fpt_pmf(std::int64_t k, double p);
double truncated_walk_pmf(std::int64_t k, std::int64_t budget);
/// (1 - sqrt(1 - e^{2it})) / e^{it}.
complex walk_fpt_cf(double t);
/// sqrt(p/(1-p)) (1 - sqrt(1 - exp(2i(t - ia)))) / exp(i(t - ia)),
/// a = log(4p(1-p))/2.
complex biased_walk_fpt_cf(double t, double p);
complex truncated_walk_cf(double t, std::int64_t budget);

double sibuya_pmf(std::int64_t k, double gamma);
double sibuya_pgf(double z, double gamma);
double trunc_sibuya_pmf(std::int64_t k, double gamma, std::int64_t bound);
double trunc_sibuya_pgf(double z, double gamma, std::int64_t bound);
double tempered_sibuya_pmf(std::int64_t k, double gamma, double tilt);
double tempered_sibuya_pgf(double z, double gamma, double tilt);

double geometric_pmf(std::int64_t k, double p);
double geometric_pgf(double z, double p);
double trunc_geometric_pmf(std::int64_t k, double p, std::int64_t bound);
double trunc_geometric_pgf(double z, double p, std::int64_t bound);

double pareto_pdf(double x, double shape);
double pareto_cdf(double x, double shape);
double pareto_lt(double s, double shape);

double exponential_pdf(double x, double scale);
double exponential_cdf(double x, double scale);
double exponential_lt(double s, double scale);
complex exponential_cf(double t, double scale);

}  // namespace tempertail::models
