#include "tempertail/models.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "tempertail/errors.hpp"
#include "tempertail/special.hpp"

namespace tempertail::models {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

using std::numbers::pi;
constexpr complex kI{0.0, 1.0};

[[noreturn]] void fail(std::string_view what) { throw ValidationError(std::string(what)); }

void require_finite(double x, std::string_view what) {
  if (!std::isfinite(x)) fail(std::string(what) + " must be finite");
}

void require_positive(double x, std::string_view model, std::string_view param) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    fail(std::string(model) + ": " + std::string(param) + " must be > 0");
  }
}

void require_open_unit(double x, std::string_view model, std::string_view param) {
  if (!(x > 0.0 && x < 1.0)) {
    fail(std::string(model) + ": " + std::string(param) + " must lie in (0,1)");
  }
}

void require_half_open_unit(double x, std::string_view model, std::string_view param) {
  if (!(x > 0.0 && x <= 1.0)) {
    fail(std::string(model) + ": " + std::string(param) + " must lie in (0,1]");
  }
}

void require_nonnegative(double x, std::string_view model, std::string_view param) {
  if (!(x >= 0.0) || !std::isfinite(x)) {
    fail(std::string(model) + ": " + std::string(param) + " must be >= 0");
  }
}

void require_pgf_point(double z) {
  if (!(z >= 0.0 && z <= 1.0)) fail("PGF argument z must lie in [0,1]");
}

void require_lt_point(double s) {
  if (!(s >= 0.0) || !std::isfinite(s)) fail("LT argument s must be >= 0");
}

std::string format_double(double x) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), end);
}

constexpr std::array<std::string_view, std::variant_size_v<Params>> kNames = {
    "levy",           "inverse-gaussian", "positive-stable", "tempered-positive-stable",
    "subgaussian",    "tempered-subgaussian", "trunc-subgaussian", "tempered-stable-mix",
    "cts",            "walk-fpt",         "biased-walk-fpt",  "trunc-walk-fpt",
    "sibuya",         "trunc-sibuya",     "tempered-sibuya",  "geometric",
    "trunc-geometric", "pareto",          "exponential"};

// Coefficients c_k = (-1)^{k+1} C(x, k), k = 1..count, from the signed
// log-gamma binomial.
std::vector<double> alternating_binomials(double x, std::int64_t count) {
  std::vector<double> coeffs(static_cast<std::size_t>(std::max<std::int64_t>(count, 0)));
  for (std::int64_t k = 1; k <= count; ++k) {
    const special::SignedLog b = special::binomial(x, k);
    coeffs[static_cast<std::size_t>(k - 1)] = (k % 2 == 1 ? 1.0 : -1.0) * b.value();
  }
  return coeffs;
}

// Truncated-walk coefficients: index j-1 holds P{T = 2j-1}, j = 1..K with
// K = [M/2]; the last entry carries the lumped mass.
std::vector<double> truncated_walk_coefficients(std::int64_t budget) {
  const std::int64_t top = budget / 2;
  std::vector<double> coeffs = alternating_binomials(0.5, top - 1);
  double head = 0.0;
  for (double c : coeffs) head += c;
  coeffs.push_back(1.0 - head);
  return coeffs;
}

double as_index(double k) {
  if (!(k >= 1.0) || std::floor(k) != k) fail("PMF argument k must be an integer >= 1");
  return k;
}

double pow_minus_one_plus(double x, double alpha) {
  // (1+x)^alpha - 1 without cancellation.
  return std::expm1(alpha * std::log1p(x));
}

// (s+a)^alpha - a^alpha, stable for s << a.
double tilted_power_gap(double s, double alpha, double tilt) {
  if (tilt == 0.0) return std::pow(s, alpha);
  return std::pow(tilt, alpha) * pow_minus_one_plus(s / tilt, alpha);
}

}  // namespace

// ---------------------------------------------------------------------------
// Validation and ModelSpec
// ---------------------------------------------------------------------------

void validate(const Params& params) {
  std::visit(
      overloaded{
          [](const Levy& m) { require_positive(m.sigma, "levy", "sigma"); },
          [](const InverseGaussian& m) {
            require_positive(m.lambda, "inverse-gaussian", "lambda");
            require_positive(m.mu, "inverse-gaussian", "mu");
          },
          [](const PositiveStable& m) {
            require_open_unit(m.alpha, "positive-stable", "alpha");
            require_positive(m.scale, "positive-stable", "scale A");
          },
          [](const TemperedPositiveStable& m) {
            require_open_unit(m.alpha, "tempered-positive-stable", "alpha");
            require_positive(m.scale, "tempered-positive-stable", "scale A");
            require_nonnegative(m.tilt, "tempered-positive-stable", "tilt a");
          },
          [](const SubGaussian& m) { require_open_unit(m.alpha, "subgaussian", "alpha"); },
          [](const TemperedSubGaussian& m) {
            require_open_unit(m.alpha, "tempered-subgaussian", "alpha");
            require_nonnegative(m.tilt, "tempered-subgaussian", "tilt a");
          },
          [](const TruncSubGaussian& m) {
            require_open_unit(m.alpha, "trunc-subgaussian", "alpha");
            require_positive(m.bound, "trunc-subgaussian", "bound M");
          },
          [](const TemperedStableMix& m) {
            require_open_unit(m.alpha, "tempered-stable-mix", "alpha");
            if (!(m.beta > 0.0 && m.beta < 2.0)) fail("tempered-stable-mix: beta must lie in (0,2)");
            if (!(2.0 * m.alpha < m.beta)) {
              fail("tempered-stable-mix: gamma = 2 alpha / beta must lie in (0,1)");
            }
            require_nonnegative(m.tilt, "tempered-stable-mix", "tilt a");
          },
          [](const Cts& m) {
            require_nonnegative(m.c1, "cts", "C1");
            require_nonnegative(m.c2, "cts", "C2");
            if (!(m.c1 + m.c2 > 0.0)) fail("cts: C1 + C2 must be > 0");
            require_positive(m.lambda_plus, "cts", "lambda+");
            require_positive(m.lambda_minus, "cts", "lambda-");
            if (!(m.alpha > 0.0 && m.alpha < 2.0) || m.alpha == 1.0) {
              fail("cts: alpha must lie in (0,2) with alpha != 1");
            }
            require_finite(m.mu, "cts: mu");
          },
          [](const WalkFpt&) {},
          [](const BiasedWalkFpt& m) {
            if (!(m.p > 0.5 && m.p < 1.0)) fail("biased-walk-fpt: p must lie in (1/2,1)");
          },
          [](const TruncWalkFpt& m) {
            if (m.budget < 2) fail("trunc-walk-fpt: budget M must be an integer >= 2");
          },
          [](const Sibuya& m) { require_half_open_unit(m.gamma, "sibuya", "gamma"); },
          [](const TruncSibuya& m) {
            require_half_open_unit(m.gamma, "trunc-sibuya", "gamma");
            if (m.bound < 1) fail("trunc-sibuya: bound M must be an integer >= 1");
          },
          [](const TemperedSibuya& m) {
            require_half_open_unit(m.gamma, "tempered-sibuya", "gamma");
            require_half_open_unit(m.tilt, "tempered-sibuya", "tilt a");
          },
          [](const Geometric& m) { require_open_unit(m.p, "geometric", "p"); },
          [](const TruncGeometric& m) {
            require_open_unit(m.p, "trunc-geometric", "p");
            if (m.bound < 2) fail("trunc-geometric: bound M must be an integer > 1");
          },
          [](const Pareto& m) { require_positive(m.shape, "pareto", "shape a"); },
          [](const Exponential& m) { require_positive(m.scale, "exponential", "scale a"); },
      },
      params);
}

ModelSpec::ModelSpec(Params params) : params_(std::move(params)) { validate(params_); }

std::string_view ModelSpec::name() const { return kNames[params_.index()]; }

std::span<const std::string_view> model_names() { return kNames; }

bool ModelSpec::is_discrete() const {
  return std::visit(overloaded{[](const WalkFpt&) { return true; },
                               [](const BiasedWalkFpt&) { return true; },
                               [](const TruncWalkFpt&) { return true; },
                               [](const Sibuya&) { return true; },
                               [](const TruncSibuya&) { return true; },
                               [](const TemperedSibuya&) { return true; },
                               [](const Geometric&) { return true; },
                               [](const TruncGeometric&) { return true; },
                               [](const auto&) { return false; }},
                    params_);
}

bool ModelSpec::is_positive() const {
  return std::visit(overloaded{[](const SubGaussian&) { return false; },
                               [](const TemperedSubGaussian&) { return false; },
                               [](const TruncSubGaussian&) { return false; },
                               [](const TemperedStableMix&) { return false; },
                               [](const Cts&) { return false; },
                               [](const auto&) { return true; }},
                    params_);
}

std::string ModelSpec::describe() const {
  std::ostringstream out;
  out << name() << '(';
  auto field = [&, first = true](std::string_view key, double value) mutable {
    if (!first) out << ", ";
    first = false;
    out << key << '=' << format_double(value);
  };
  std::visit(overloaded{
                 [&](const Levy& m) { field("sigma", m.sigma); },
                 [&](const InverseGaussian& m) {
                   field("lambda", m.lambda);
                   field("mu", m.mu);
                 },
                 [&](const PositiveStable& m) {
                   field("alpha", m.alpha);
                   field("scale", m.scale);
                 },
                 [&](const TemperedPositiveStable& m) {
                   field("alpha", m.alpha);
                   field("scale", m.scale);
                   field("tilt", m.tilt);
                 },
                 [&](const SubGaussian& m) { field("alpha", m.alpha); },
                 [&](const TemperedSubGaussian& m) {
                   field("alpha", m.alpha);
                   field("tilt", m.tilt);
                 },
                 [&](const TruncSubGaussian& m) {
                   field("alpha", m.alpha);
                   field("bound", m.bound);
                 },
                 [&](const TemperedStableMix& m) {
                   field("alpha", m.alpha);
                   field("beta", m.beta);
                   field("tilt", m.tilt);
                 },
                 [&](const Cts& m) {
                   field("c1", m.c1);
                   field("c2", m.c2);
                   field("lambda_plus", m.lambda_plus);
                   field("lambda_minus", m.lambda_minus);
                   field("alpha", m.alpha);
                   field("mu", m.mu);
                 },
                 [&](const WalkFpt&) {},
                 [&](const BiasedWalkFpt& m) { field("p", m.p); },
                 [&](const TruncWalkFpt& m) { field("budget", static_cast<double>(m.budget)); },
                 [&](const Sibuya& m) { field("gamma", m.gamma); },
                 [&](const TruncSibuya& m) {
                   field("gamma", m.gamma);
                   field("bound", static_cast<double>(m.bound));
                 },
                 [&](const TemperedSibuya& m) {
                   field("gamma", m.gamma);
                   field("tilt", m.tilt);
                 },
                 [&](const Geometric& m) { field("p", m.p); },
                 [&](const TruncGeometric& m) {
                   field("p", m.p);
                   field("bound", static_cast<double>(m.bound));
                 },
                 [&](const Pareto& m) { field("shape", m.shape); },
                 [&](const Exponential& m) { field("scale", m.scale); },
             },
             params_);
  out << ')';
  return out.str();
}

// ---------------------------------------------------------------------------
// Transform kinds and queries
// ---------------------------------------------------------------------------

std::string_view to_string(TransformKind kind) {
  switch (kind) {
    case TransformKind::CF: return "cf";
    case TransformKind::PGF: return "pgf";
    case TransformKind::LT: return "lt";
    case TransformKind::PDF: return "pdf";
    case TransformKind::PMF: return "pmf";
  }
  return "?";
}

TransformKind parse_transform_kind(std::string_view text) {
  for (TransformKind kind : {TransformKind::CF, TransformKind::PGF, TransformKind::LT,
                             TransformKind::PDF, TransformKind::PMF}) {
    if (to_string(kind) == text) return kind;
  }
  fail("unknown transform kind '" + std::string(text) + "' (expected cf|pgf|lt|pdf|pmf)");
}

TransformQuery::TransformQuery(TransformKind kind_, std::vector<double> points_)
    : kind(kind_), points(std::move(points_)) {
  if (points.empty()) fail("transform query needs at least one point");
  for (double x : points) {
    require_finite(x, "evaluation point");
    switch (kind) {
      case TransformKind::PGF: require_pgf_point(x); break;
      case TransformKind::LT: require_lt_point(x); break;
      case TransformKind::PMF: as_index(x); break;
      case TransformKind::CF:
      case TransformKind::PDF: break;
    }
  }
}

// ---------------------------------------------------------------------------
// Closed forms: Levy and inverse Gaussian
// ---------------------------------------------------------------------------

complex levy_cf(double t, double sigma) {
  require_finite(t, "t");
  require_positive(sigma, "levy", "sigma");
  return std::exp(-std::sqrt(complex(0.0, -2.0 * sigma * t)));
}

double levy_lt(double s, double sigma) {
  require_lt_point(s);
  require_positive(sigma, "levy", "sigma");
  return std::exp(-std::sqrt(2.0 * sigma * s));
}

double levy_pdf(double x, double sigma) {
  require_positive(sigma, "levy", "sigma");
  if (!(x > 0.0)) fail("levy_pdf: x must be > 0");
  return std::exp(0.5 * std::log(sigma / (2.0 * pi)) - 1.5 * std::log(x) - sigma / (2.0 * x));
}

double levy_cdf(double x, double sigma) {
  require_positive(sigma, "levy", "sigma");
  if (x <= 0.0) return 0.0;
  return boost::math::erfc(std::sqrt(sigma / (2.0 * x)));
}

complex ig_cf(double t, double lambda, double mu) {
  require_finite(t, "t");
  require_positive(lambda, "inverse-gaussian", "lambda");
  require_positive(mu, "inverse-gaussian", "mu");
  return std::exp((lambda / mu) * (1.0 - std::sqrt(complex(1.0, -2.0 * t * mu * mu / lambda))));
}

namespace {
// (lambda/mu)(1 - sqrt(1 + 2 mu^2 s / lambda)) in rationalized form.
double ig_lt_exponent(double s, double lambda, double mu) {
  const double y = 2.0 * mu * mu * s / lambda;
  return -(lambda / mu) * y / (1.0 + std::sqrt(1.0 + y));
}
}  // namespace

double ig_lt(double s, double lambda, double mu) {
  require_lt_point(s);
  require_positive(lambda, "inverse-gaussian", "lambda");
  require_positive(mu, "inverse-gaussian", "mu");
  return std::exp(ig_lt_exponent(s, lambda, mu));
}

double ig_pdf(double x, double lambda, double mu) {
  require_positive(lambda, "inverse-gaussian", "lambda");
  require_positive(mu, "inverse-gaussian", "mu");
  if (!(x > 0.0)) fail("ig_pdf: x must be > 0");
  const double d = x - mu;
  return std::exp(0.5 * std::log(lambda / (2.0 * pi)) - 1.5 * std::log(x) - lambda * d * d / (2.0 * x * mu * mu));
}

double ig_cdf(double x, double lambda, double mu) {
  require_positive(lambda, "inverse-gaussian", "lambda");
  require_positive(mu, "inverse-gaussian", "mu");
  if (x <= 0.0) return 0.0;
  const double r = std::sqrt(lambda / x);
  const double first = 0.5 * boost::math::erfc(-r * (x / mu - 1.0) / std::numbers::sqrt2);
  // exp(2 lambda/mu) Phi(-r(x/mu+1)), combined in log space.
  const double y = r * (x / mu + 1.0) / std::numbers::sqrt2;
  const double tail = boost::math::erfc(y);
  const double second = tail > 0.0 ? std::exp(2.0 * lambda / mu + std::log(0.5 * tail)) : 0.0;
  return std::min(1.0, first + second);
}

// ---------------------------------------------------------------------------
// CTS
// ---------------------------------------------------------------------------

complex cts_cf(double u, const Cts& params) {
  require_finite(u, "u");
  validate(params);
  const double g = std::tgamma(-params.alpha);
  const double a = params.alpha;
  const complex plus =
      params.c1 * g * (std::pow(complex(params.lambda_plus, -u), a) - std::pow(params.lambda_plus, a));
  const complex minus =
      params.c2 * g * (std::pow(complex(params.lambda_minus, u), a) - std::pow(params.lambda_minus, a));
  return std::exp(kI * u * params.mu + plus + minus);
}

// ---------------------------------------------------------------------------
// Positive stable family
// ---------------------------------------------------------------------------

double positive_stable_lt(double s, double alpha, double scale) {
  require_lt_point(s);
  validate(PositiveStable{alpha, scale});
  return std::exp(-scale * std::pow(s, alpha));
}

double tempered_positive_stable_lt(double s, double alpha, double scale, double tilt) {
  require_lt_point(s);
  validate(TemperedPositiveStable{alpha, scale, tilt});
  return std::exp(-scale * tilted_power_gap(s, alpha, tilt));
}

complex positive_stable_cf(double t, double alpha, double scale) {
  require_finite(t, "t");
  validate(PositiveStable{alpha, scale});
  if (t == 0.0) return 1.0;
  return std::exp(-scale * std::pow(complex(0.0, -t), alpha));
}

complex tempered_positive_stable_cf(double t, double alpha, double scale, double tilt) {
  require_finite(t, "t");
  validate(TemperedPositiveStable{alpha, scale, tilt});
  if (t == 0.0) return 1.0;
  return std::exp(-scale * (std::pow(complex(tilt, -t), alpha) - std::pow(tilt, alpha)));
}

double positive_stable_cdf(double x, double alpha, double scale) {
  validate(PositiveStable{alpha, scale});
  if (!(x > 0.0)) return 0.0;
  if (std::isinf(x)) return 1.0;
  // Kanter: X = (a(theta)/E)^{(1-alpha)/alpha}, theta ~ U(0,pi), E ~ Exp(1),
  // so F(x) = (1/pi) int_0^pi exp(-a(theta) x^{-alpha/(1-alpha)}) dtheta.
  const double y = x * std::pow(scale, -1.0 / alpha);
  const double q = 1.0 - alpha;
  const double log_y_term = -(alpha / q) * std::log(y);
  auto integrand = [&](double theta) {
    const double log_a = std::log(std::sin(q * theta)) +
                         (alpha / q) * std::log(std::sin(alpha * theta)) -
                         std::log(std::sin(theta)) / q;
    return std::exp(-std::exp(log_a + log_y_term));
  };
  const double value = special::integrate(integrand, 0.0, pi, 1e-12) / pi;
  return std::clamp(value, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Sub-Gaussian family
// ---------------------------------------------------------------------------

double subgaussian_cf(double t, double alpha) {
  require_finite(t, "t");
  validate(SubGaussian{alpha});
  return std::exp(-std::pow(0.5 * t * t, alpha));
}

double tempered_subgaussian_cf(double t, double alpha, double tilt) {
  require_finite(t, "t");
  validate(TemperedSubGaussian{alpha, tilt});
  return std::exp(-tilted_power_gap(0.5 * t * t, alpha, tilt));
}

double trunc_subgaussian_cf(double t, double alpha, double bound) {
  require_finite(t, "t");
  validate(TruncSubGaussian{alpha, bound});
  const double u = 0.5 * t * t;
  if (u == 0.0) return 1.0;
  const double base = std::exp(-std::pow(u, alpha));
  const double damp = std::exp(-u * bound);
  if (damp == 0.0) return base;
  // E exp(-u min(A,M)) = L(u) + u int_M^inf e^{-ux} P{A > x} dx. With the
  // Kanter form of P{A > x} and x = M + y/u the inner integral becomes
  // e^{-uM} int_0^inf e^{-y} (1 - exp(-a(theta) (M + y/u)^{-rho})) dy.
  const double q = 1.0 - alpha;
  const double rho = alpha / q;
  // The inner integrand varies on the scale y ~ uM; split [0, inf) into
  // decades of y/(uM) below 1 so a fixed rule resolves each piece.
  std::vector<double> cuts{0.0};
  for (double c = u * bound; c < 1.0; c *= 10.0) cuts.push_back(c);
  cuts.push_back(std::max(1.0, u * bound));
  auto outer = [&](double theta) {
    const double log_a = std::log(std::sin(q * theta)) + rho * std::log(std::sin(alpha * theta)) -
                         std::log(std::sin(theta)) / q;
    auto inner = [&](double y) {
      return std::exp(-y) * -std::expm1(-std::exp(log_a - rho * std::log(bound + y / u)));
    };
    double total = special::integrate_fixed(inner, cuts.back(), std::numeric_limits<double>::infinity());
    for (std::size_t i = 1; i < cuts.size(); ++i) total += special::integrate_fixed(inner, cuts[i - 1], cuts[i]);
    return total;
  };
  return base + damp * special::integrate(outer, 0.0, pi, 1e-11) / pi;
}

double stable_mix_scale(double alpha, double beta) {
  const double gamma = 2.0 * alpha / beta;
  return std::pow(2.0, -alpha / gamma);
}

double tempered_stable_mix_cf(double t, double alpha, double beta, double tilt) {
  require_finite(t, "t");
  validate(TemperedStableMix{alpha, beta, tilt});
  const double gamma = 2.0 * alpha / beta;
  const double c = stable_mix_scale(alpha, beta);
  return std::exp(-tilted_power_gap(c * std::pow(std::abs(t), beta), gamma, tilt));
}

// ---------------------------------------------------------------------------
// Random-walk first passage
// ---------------------------------------------------------------------------

double walk_fpt_pgf(double z) {
  require_pgf_point(z);
  // (1 - sqrt(1-z^2))/z, rationalized so that z = 0 is regular.
  return z / (1.0 + std::sqrt(1.0 - z * z));
}

double biased_walk_fpt_pgf(double z, double p) {
  require_pgf_point(z);
  validate(BiasedWalkFpt{p});
  // (1 - sqrt(1 - 4p(1-p)z^2)) / (2(1-p)z), rationalized.
  return 2.0 * p * z / (1.0 + std::sqrt(1.0 - 4.0 * p * (1.0 - p) * z * z));
}

double truncated_walk_pgf(double z, std::int64_t budget) {
  require_pgf_point(z);
  validate(TruncWalkFpt{budget});
  const std::vector<double> coeffs = truncated_walk_coefficients(budget);
  double value = 0.0;
  double power = z;  // z^{2j-1}
  for (double c : coeffs) {
    value += c * power;
    power *= z * z;
  }
  return value;
}

double walk_fpt_pmf(std::int64_t k) {
  as_index(static_cast<double>(k));
  if (k % 2 == 0) return 0.0;
  const std::int64_t j = (k + 1) / 2;
  return (j % 2 == 1 ? 1.0 : -1.0) * special::binomial(0.5, j).value();
}

double biased_walk_fpt_pmf(std::int64_t k, double p) {
  validate(BiasedWalkFpt{p});
  const double base = walk_fpt_pmf(k);
  if (base == 0.0) return 0.0;
  const double j = static_cast<double>((k + 1) / 2);
  return base * std::exp(j * std::log(4.0 * p * (1.0 - p))) / (2.0 * (1.0 - p));
}

double truncated_walk_pmf(std::int64_t k, std::int64_t budget) {
  validate(TruncWalkFpt{budget});
  as_index(static_cast<double>(k));
  const std::int64_t top = budget / 2;
  if (k % 2 == 0 || k > 2 * top - 1) return 0.0;
  if (k < 2 * top - 1) return walk_fpt_pmf(k);
  return truncated_walk_coefficients(budget).back();
}

complex walk_fpt_cf(double t) {
  require_finite(t, "t");
  const complex z = std::exp(kI * t);
  return (1.0 - std::sqrt(1.0 - z * z)) / z;
}

complex biased_walk_fpt_cf(double t, double p) {
  require_finite(t, "t");
  validate(BiasedWalkFpt{p});
  const double a = 0.5 * std::log(4.0 * p * (1.0 - p));
  const complex shifted(t, -a);  // t - i a
  return std::sqrt(p / (1.0 - p)) * (1.0 - std::sqrt(1.0 - std::exp(2.0 * kI * shifted))) /
         std::exp(kI * shifted);
}

complex truncated_walk_cf(double t, std::int64_t budget) {
  require_finite(t, "t");
  validate(TruncWalkFpt{budget});
  const std::vector<double> coeffs = truncated_walk_coefficients(budget);
  const complex z = std::exp(kI * t);
  complex value = 0.0;
  complex power = z;
  for (double c : coeffs) {
    value += c * power;
    power *= z * z;
  }
  return value;
}

// ---------------------------------------------------------------------------
// Sibuya family
// ---------------------------------------------------------------------------

double sibuya_pmf(std::int64_t k, double gamma) {
  require_half_open_unit(gamma, "sibuya", "gamma");
  as_index(static_cast<double>(k));
  return special::sibuya_pmf(gamma, static_cast<double>(k));
}

double sibuya_pgf(double z, double gamma) {
  require_pgf_point(z);
  require_half_open_unit(gamma, "sibuya", "gamma");
  return 1.0 - std::pow(1.0 - z, gamma);
}

double trunc_sibuya_pmf(std::int64_t k, double gamma, std::int64_t bound) {
  validate(TruncSibuya{gamma, bound});
  as_index(static_cast<double>(k));
  if (k > bound) return 0.0;
  const double mass = 1.0 - special::sibuya_survival(gamma, static_cast<double>(bound));
  return special::sibuya_pmf(gamma, static_cast<double>(k)) / mass;
}

double trunc_sibuya_pgf(double z, double gamma, std::int64_t bound) {
  require_pgf_point(z);
  validate(TruncSibuya{gamma, bound});
  const std::vector<double> coeffs = alternating_binomials(gamma, bound);
  double numerator = 0.0;
  double denominator = 0.0;
  double power = 1.0;
  for (double c : coeffs) {
    power *= z;
    numerator += c * power;
    denominator += c;
  }
  return numerator / denominator;
}

double tempered_sibuya_pmf(std::int64_t k, double gamma, double tilt) {
  validate(TemperedSibuya{gamma, tilt});
  as_index(static_cast<double>(k));
  const double norm = -std::expm1(gamma * std::log1p(-tilt));
  const double kd = static_cast<double>(k);
  return special::sibuya_pmf(gamma, kd) * std::exp(kd * std::log(tilt)) / norm;
}

double tempered_sibuya_pgf(double z, double gamma, double tilt) {
  require_pgf_point(z);
  validate(TemperedSibuya{gamma, tilt});
  // (1 - (1-az)^gamma) / (1 - (1-a)^gamma)
  return std::expm1(gamma * std::log1p(-tilt * z)) / std::expm1(gamma * std::log1p(-tilt));
}

// ---------------------------------------------------------------------------
// Geometric family
// ---------------------------------------------------------------------------

double geometric_pmf(std::int64_t k, double p) {
  require_open_unit(p, "geometric", "p");
  as_index(static_cast<double>(k));
  return p * std::exp(static_cast<double>(k - 1) * std::log1p(-p));
}

double geometric_pgf(double z, double p) {
  require_pgf_point(z);
  require_open_unit(p, "geometric", "p");
  return p * z / (1.0 - (1.0 - p) * z);
}

double trunc_geometric_pmf(std::int64_t k, double p, std::int64_t bound) {
  validate(TruncGeometric{p, bound});
  as_index(static_cast<double>(k));
  if (k > bound) fail("trunc_geometric_pmf: k must lie in {1..M}");
  const double log_q = std::log1p(-p);
  return p * std::exp(static_cast<double>(k - 1) * log_q) /
         -std::expm1(static_cast<double>(bound) * log_q);
}

double trunc_geometric_pgf(double z, double p, std::int64_t bound) {
  require_pgf_point(z);
  validate(TruncGeometric{p, bound});
  const double log_q = std::log1p(-p);
  const double m = static_cast<double>(bound);
  // p z (1 - q^M z^M) / ((1 - q^M)(1 - q z))
  const double head = z == 0.0 ? 1.0 : -std::expm1(m * (log_q + std::log(z)));
  const double norm = -std::expm1(m * log_q);
  return p * z * head / (norm * (1.0 - (1.0 - p) * z));
}

// ---------------------------------------------------------------------------
// Pareto and exponential
// ---------------------------------------------------------------------------

double pareto_pdf(double x, double shape) {
  require_positive(shape, "pareto", "shape a");
  if (!(x > 0.0)) fail("pareto_pdf: x must be > 0");
  return x <= 1.0 ? 0.0 : shape * std::pow(x, -shape - 1.0);
}

double pareto_cdf(double x, double shape) {
  require_positive(shape, "pareto", "shape a");
  return x <= 1.0 ? 0.0 : -std::expm1(-shape * std::log(x));
}

namespace {
// Substituting u = x^{-a}: E f(X) = int_0^1 f(u^{-1/a}) du.
double pareto_lt_integral(double s, double shape, bool complement) {
  auto integrand = [&](double u) {
    const double x = std::pow(u, -1.0 / shape);
    return complement ? -std::expm1(-s * x) : std::exp(-s * x);
  };
  return special::integrate_singular(integrand, 0.0, 1.0, 1e-12);
}
}  // namespace

double pareto_lt(double s, double shape) {
  require_lt_point(s);
  require_positive(shape, "pareto", "shape a");
  if (s == 0.0) return 1.0;
  return pareto_lt_integral(s, shape, false);
}

double exponential_pdf(double x, double scale) {
  require_positive(scale, "exponential", "scale a");
  if (!(x > 0.0)) fail("exponential_pdf: x must be > 0");
  return std::exp(-x / scale) / scale;
}

double exponential_cdf(double x, double scale) {
  require_positive(scale, "exponential", "scale a");
  return x <= 0.0 ? 0.0 : -std::expm1(-x / scale);
}

double exponential_lt(double s, double scale) {
  require_lt_point(s);
  require_positive(scale, "exponential", "scale a");
  return 1.0 / (1.0 + scale * s);
}

complex exponential_cf(double t, double scale) {
  require_finite(t, "t");
  require_positive(scale, "exponential", "scale a");
  return 1.0 / complex(1.0, -scale * t);
}

// ---------------------------------------------------------------------------
// Generic dispatch
// ---------------------------------------------------------------------------

std::vector<TransformKind> supported_kinds(const ModelSpec& model) {
  using K = TransformKind;
  if (model.is_discrete()) return {K::CF, K::PGF, K::LT, K::PMF};
  return std::visit(
      overloaded{
          [](const Levy&) { return std::vector<K>{K::CF, K::LT, K::PDF}; },
          [](const InverseGaussian&) { return std::vector<K>{K::CF, K::LT, K::PDF}; },
          [](const PositiveStable&) { return std::vector<K>{K::CF, K::LT}; },
          [](const TemperedPositiveStable&) { return std::vector<K>{K::CF, K::LT}; },
          [](const Pareto&) { return std::vector<K>{K::LT, K::PDF}; },
          [](const Exponential&) { return std::vector<K>{K::CF, K::LT, K::PDF}; },
          [](const auto&) { return std::vector<K>{K::CF}; },
      },
      model.params());
}

bool supports(const ModelSpec& model, TransformKind kind) {
  const auto kinds = supported_kinds(model);
  return std::find(kinds.begin(), kinds.end(), kind) != kinds.end();
}

namespace {

[[noreturn]] void unsupported(const ModelSpec& model, TransformKind kind) {
  throw UnsupportedTransform("model " + std::string(model.name()) + " has no " +
                             std::string(to_string(kind)) + " evaluator");
}

complex discrete_pgf_complex(const ModelSpec& model, complex z) {
  return std::visit(
      overloaded{
          [&](const WalkFpt&) { return (1.0 - std::sqrt(1.0 - z * z)) / z; },
          [&](const BiasedWalkFpt& m) {
            const double q = 1.0 - m.p;
            return (1.0 - std::sqrt(1.0 - 4.0 * m.p * q * z * z)) / (2.0 * q * z);
          },
          [&](const TruncWalkFpt& m) {
            complex value = 0.0, power = z;
            for (double c : truncated_walk_coefficients(m.budget)) {
              value += c * power;
              power *= z * z;
            }
            return value;
          },
          [&](const Sibuya& m) {
            const complex w = 1.0 - z;
            return std::abs(w) == 0.0 ? complex(1.0) : 1.0 - std::pow(w, m.gamma);
          },
          [&](const TruncSibuya& m) {
            const auto coeffs = alternating_binomials(m.gamma, m.bound);
            complex numerator = 0.0, power = 1.0;
            double denominator = 0.0;
            for (double c : coeffs) {
              power *= z;
              numerator += c * power;
              denominator += c;
            }
            return numerator / denominator;
          },
          [&](const TemperedSibuya& m) {
            const complex w = 1.0 - m.tilt * z;
            const complex head = std::abs(w) == 0.0 ? complex(1.0) : 1.0 - std::pow(w, m.gamma);
            return head / -std::expm1(m.gamma * std::log1p(-m.tilt));
          },
          [&](const Geometric& m) { return m.p * z / (1.0 - (1.0 - m.p) * z); },
          [&](const TruncGeometric& m) {
            const double q = 1.0 - m.p;
            const double norm = -std::expm1(static_cast<double>(m.bound) * std::log1p(-m.p));
            const complex qz_m = std::pow(q * z, static_cast<double>(m.bound));
            return m.p * z * (1.0 - qz_m) / (norm * (1.0 - q * z));
          },
          [&](const auto&) -> complex { unsupported(model, TransformKind::PGF); },
      },
      model.params());
}

double discrete_pgf(const ModelSpec& model, double z) {
  return std::visit(
      overloaded{
          [&](const WalkFpt&) { return walk_fpt_pgf(z); },
          [&](const BiasedWalkFpt& m) { return biased_walk_fpt_pgf(z, m.p); },
          [&](const TruncWalkFpt& m) { return truncated_walk_pgf(z, m.budget); },
          [&](const Sibuya& m) { return sibuya_pgf(z, m.gamma); },
          [&](const TruncSibuya& m) { return trunc_sibuya_pgf(z, m.gamma, m.bound); },
          [&](const TemperedSibuya& m) { return tempered_sibuya_pgf(z, m.gamma, m.tilt); },
          [&](const Geometric& m) { return geometric_pgf(z, m.p); },
          [&](const TruncGeometric& m) { return trunc_geometric_pgf(z, m.p, m.bound); },
          [&](const auto&) -> double { unsupported(model, TransformKind::PGF); },
      },
      model.params());
}

double discrete_pmf(const ModelSpec& model, std::int64_t k) {
  return std::visit(
      overloaded{
          [&](const WalkFpt&) { return walk_fpt_pmf(k); },
          [&](const BiasedWalkFpt& m) { return biased_walk_fpt_pmf(k, m.p); },
          [&](const TruncWalkFpt& m) { return truncated_walk_pmf(k, m.budget); },
          [&](const Sibuya& m) { return sibuya_pmf(k, m.gamma); },
          [&](const TruncSibuya& m) { return trunc_sibuya_pmf(k, m.gamma, m.bound); },
          [&](const TemperedSibuya& m) { return tempered_sibuya_pmf(k, m.gamma, m.tilt); },
          [&](const Geometric& m) { return geometric_pmf(k, m.p); },
          [&](const TruncGeometric& m) {
            return k > m.bound ? 0.0 : trunc_geometric_pmf(k, m.p, m.bound);
          },
          [&](const auto&) -> double { unsupported(model, TransformKind::PMF); },
      },
      model.params());
}

complex continuous_cf(const ModelSpec& model, double t) {
  return std::visit(
      overloaded{
          [&](const Levy& m) { return levy_cf(t, m.sigma); },
          [&](const InverseGaussian& m) { return ig_cf(t, m.lambda, m.mu); },
          [&](const PositiveStable& m) { return positive_stable_cf(t, m.alpha, m.scale); },
          [&](const TemperedPositiveStable& m) {
            return tempered_positive_stable_cf(t, m.alpha, m.scale, m.tilt);
          },
          [&](const SubGaussian& m) { return complex(subgaussian_cf(t, m.alpha)); },
          [&](const TemperedSubGaussian& m) {
            return complex(tempered_subgaussian_cf(t, m.alpha, m.tilt));
          },
          [&](const TruncSubGaussian& m) {
            return complex(trunc_subgaussian_cf(t, m.alpha, m.bound));
          },
          [&](const TemperedStableMix& m) {
            return complex(tempered_stable_mix_cf(t, m.alpha, m.beta, m.tilt));
          },
          [&](const Cts& m) { return cts_cf(t, m); },
          [&](const Exponential& m) { return exponential_cf(t, m.scale); },
          [&](const auto&) -> complex { unsupported(model, TransformKind::CF); },
      },
      model.params());
}

double continuous_lt(const ModelSpec& model, double s) {
  return std::visit(
      overloaded{
          [&](const Levy& m) { return levy_lt(s, m.sigma); },
          [&](const InverseGaussian& m) { return ig_lt(s, m.lambda, m.mu); },
          [&](const PositiveStable& m) { return positive_stable_lt(s, m.alpha, m.scale); },
          [&](const TemperedPositiveStable& m) {
            return tempered_positive_stable_lt(s, m.alpha, m.scale, m.tilt);
          },
          [&](const Pareto& m) { return pareto_lt(s, m.shape); },
          [&](const Exponential& m) { return exponential_lt(s, m.scale); },
          [&](const auto&) -> double { unsupported(model, TransformKind::LT); },
      },
      model.params());
}

double continuous_pdf(const ModelSpec& model, double x) {
  return std::visit(
      overloaded{
          [&](const Levy& m) { return levy_pdf(x, m.sigma); },
          [&](const InverseGaussian& m) { return ig_pdf(x, m.lambda, m.mu); },
          [&](const Pareto& m) { return pareto_pdf(x, m.shape); },
          [&](const Exponential& m) { return exponential_pdf(x, m.scale); },
          [&](const auto&) -> double { unsupported(model, TransformKind::PDF); },
      },
      model.params());
}

}  // namespace

TransformResult evaluate(const ModelSpec& model, const TransformQuery& query) {
  if (!supports(model, query.kind)) unsupported(model, query.kind);
  TransformResult result{query.kind, {}};
  result.values.reserve(query.points.size());
  for (double x : query.points) {
    switch (query.kind) {
      case TransformKind::CF:
        if (model.is_discrete()) {
          result.values.push_back(x == 0.0 ? complex(1.0)
                                           : discrete_pgf_complex(model, std::exp(kI * x)));
        } else {
          result.values.push_back(continuous_cf(model, x));
        }
        break;
      case TransformKind::PGF: result.values.emplace_back(discrete_pgf(model, x)); break;
      case TransformKind::LT:
        result.values.emplace_back(model.is_discrete() ? discrete_pgf(model, std::exp(-x))
                                                       : continuous_lt(model, x));
        break;
      case TransformKind::PDF: result.values.emplace_back(continuous_pdf(model, x)); break;
      case TransformKind::PMF:
        result.values.emplace_back(discrete_pmf(model, static_cast<std::int64_t>(x)));
        break;
    }
  }
  return result;
}

complex characteristic_function(const ModelSpec& model, double t) {
  return evaluate(model, TransformQuery(TransformKind::CF, {t})).values.front();
}

double laplace_transform(const ModelSpec& model, double s) {
  return evaluate(model, TransformQuery(TransformKind::LT, {s})).values.front().real();
}

double laplace_complement(const ModelSpec& model, double s) {
  require_lt_point(s);
  if (!supports(model, TransformKind::LT)) unsupported(model, TransformKind::LT);
  return std::visit(
      overloaded{
          [&](const Levy& m) { return -std::expm1(-std::sqrt(2.0 * m.sigma * s)); },
          [&](const InverseGaussian& m) { return -std::expm1(ig_lt_exponent(s, m.lambda, m.mu)); },
          [&](const PositiveStable& m) { return -std::expm1(-m.scale * std::pow(s, m.alpha)); },
          [&](const TemperedPositiveStable& m) {
            return -std::expm1(-m.scale * tilted_power_gap(s, m.alpha, m.tilt));
          },
          [&](const Pareto& m) { return s == 0.0 ? 0.0 : pareto_lt_integral(s, m.shape, true); },
          [&](const Exponential& m) { return m.scale * s / (1.0 + m.scale * s); },
          [&](const auto&) { return 1.0 - laplace_transform(model, s); },
      },
      model.params());
}

double pgf(const ModelSpec& model, double z) {
  return evaluate(model, TransformQuery(TransformKind::PGF, {z})).values.front().real();
}

double pmf(const ModelSpec& model, std::int64_t k) {
  return evaluate(model, TransformQuery(TransformKind::PMF, {static_cast<double>(k)}))
      .values.front()
      .real();
}

double survival(const ModelSpec& model, double k) {
  if (!model.is_discrete()) unsupported(model, TransformKind::PMF);
  if (k < 1.0) return 1.0;
  const double kf = std::floor(k);
  auto summed = [&](std::int64_t top) {
    double head = 0.0;
    for (std::int64_t j = 1; j <= top; ++j) head += discrete_pmf(model, j);
    return std::max(0.0, 1.0 - head);
  };
  return std::visit(
      overloaded{
          [&](const WalkFpt&) { return special::walk_fpt_survival(std::floor((kf + 1.0) / 2.0)); },
          [&](const Sibuya& m) { return special::sibuya_survival(m.gamma, kf); },
          [&](const TruncSibuya& m) {
            const double bound = static_cast<double>(m.bound);
            if (kf >= bound) return 0.0;
            const double tail = special::sibuya_survival(m.gamma, bound);
            return (special::sibuya_survival(m.gamma, kf) - tail) / (1.0 - tail);
          },
          [&](const Geometric& m) { return std::exp(kf * std::log1p(-m.p)); },
          [&](const TruncGeometric& m) {
            const double bound = static_cast<double>(m.bound);
            if (kf >= bound) return 0.0;
            const double log_q = std::log1p(-m.p);
            return (std::exp(kf * log_q) - std::exp(bound * log_q)) / -std::expm1(bound * log_q);
          },
          [&](const TruncWalkFpt& m) {
            const double last = static_cast<double>(2 * (m.budget / 2) - 1);
            if (kf >= last) return 0.0;
            return special::walk_fpt_survival(std::floor((kf + 1.0) / 2.0));
          },
          [&](const auto&) { return summed(static_cast<std::int64_t>(kf)); },
      },
      model.params());
}

double cdf(const ModelSpec& model, double x) {
  if (model.is_discrete()) return 1.0 - survival(model, x);
  return std::visit(
      overloaded{
          [&](const Levy& m) { return levy_cdf(x, m.sigma); },
          [&](const InverseGaussian& m) { return ig_cdf(x, m.lambda, m.mu); },
          [&](const PositiveStable& m) { return positive_stable_cdf(x, m.alpha, m.scale); },
          [&](const Pareto& m) { return pareto_cdf(x, m.shape); },
          [&](const Exponential& m) { return exponential_cdf(x, m.scale); },
          [&](const auto&) -> double {
            throw UnsupportedTransform("model " + std::string(model.name()) + " has no CDF");
          },
      },
      model.params());
}

bool in_support(const ModelSpec& model, double x) {
  if (!std::isfinite(x)) return false;
  const bool integer = std::floor(x) == x && x >= 1.0;
  const bool odd = integer && std::fmod(x, 2.0) == 1.0;
  return std::visit(
      overloaded{
          [&](const WalkFpt&) { return odd; },
          [&](const BiasedWalkFpt&) { return odd; },
          [&](const TruncWalkFpt& m) {
            return odd && x <= static_cast<double>(2 * (m.budget / 2) - 1);
          },
          [&](const Sibuya&) { return integer; },
          [&](const TruncSibuya& m) { return integer && x <= static_cast<double>(m.bound); },
          [&](const TemperedSibuya&) { return integer; },
          [&](const Geometric&) { return integer; },
          [&](const TruncGeometric& m) { return integer && x <= static_cast<double>(m.bound); },
          [&](const Pareto&) { return x >= 1.0; },
          [&](const SubGaussian&) { return true; },
          [&](const TemperedSubGaussian&) { return true; },
          [&](const TruncSubGaussian&) { return true; },
          [&](const TemperedStableMix&) { return true; },
          [&](const Cts&) { return true; },
          [&](const auto&) { return x > 0.0; },
      },
      model.params());
}

}  // namespace tempertail::models
