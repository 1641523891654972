#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tempertail/models.hpp"

namespace tempertail::estimation {

struct TailEstimate {
  double index = 0.0;
  std::size_t k = 0;
  double std_error = 0.0;
};

/// floor(sqrt(n)), at least 1.
std::size_t default_hill_k(std::size_t n);

/// Hill estimator [ (1/k) sum_{i<=k} log(x_(n-i+1) / x_(n-k)) ]^{-1} with
/// standard error index / sqrt(k). Samples must be positive and 1 <= k < n.
TailEstimate hill(std::span<const double> samples, std::size_t k);
TailEstimate hill(std::span<const double> samples);

/// Sample means of e^{itX}, z^X or e^{-sX} with per-point standard errors
/// sqrt(sample variance / n); for CF the variance is E|e^{itX} - mean|^2.
struct EmpiricalTransform {
  models::TransformKind kind;
  std::vector<double> points;
  std::vector<std::complex<double>> values;
  std::vector<double> std_errors;
};

/// kind is CF, PGF or LT. PGF needs integer samples >= 0, LT needs samples >= 0.
EmpiricalTransform empirical_transform(std::span<const double> samples,
                                       models::TransformKind kind,
                                       const std::vector<double>& points);

/// sup_x |F_n(x) - F(x)| over the sample points (ties handled by atoms).
double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf);
/// sup_x |F_n(x) - G_m(x)|.
double ks_two_sample(std::span<const double> a, std::span<const double> b);
/// sqrt(-log(level/2)/2), the asymptotic Kolmogorov quantile (1.949 at 1e-3).
double ks_coefficient(double level);
double ks_critical(double level, std::size_t n);
double ks_critical_two_sample(double level, std::size_t n, std::size_t m);

enum class TailClass { PowerLike, LighterThanPower };
std::string_view to_string(TailClass cls);

struct CurvatureFit {
  TailClass classification = TailClass::LighterThanPower;
  /// Least-squares slopes of log S(x) against log x, one per window.
  std::vector<double> slopes;
  /// Slope over the whole grid.
  double slope = 0.0;
  /// max(slopes) - min(slopes).
  double spread = 0.0;
  std::size_t tail_points = 0;
};

inline constexpr double kCurvatureSpread = 0.2;
inline constexpr std::size_t kMinTailPoints = 100;
inline constexpr std::size_t kCurvatureWindows = 4;

/// 40 log-spaced points from the 0.9 quantile up to the order statistic that
/// leaves max(100, n/1000) samples above it. Throws ValidationError when that
/// range is empty.
std::vector<double> default_curvature_grid(std::span<const double> samples);

/// Power-like when the log-log survival slope is stable across sub-windows of
/// the grid (spread < kCurvatureSpread), lighter-than-power otherwise. The
/// grid must be increasing, positive, and leave at least 100 samples above
/// its first point; an empty grid selects default_curvature_grid().
CurvatureFit survival_curvature(std::span<const double> samples, std::vector<double> grid = {});

/// A named check: pass iff statistic <= tolerance (NaN fails).
struct VerificationReport {
  std::string name;
  double statistic = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::vector<std::pair<std::string, std::string>> metadata;

  static VerificationReport make(std::string name, double statistic, double tolerance);
  VerificationReport& with(std::string key, std::string value);
  VerificationReport& with(std::string key, double value);
  /// Metadata value or empty string.
  std::string get(std::string_view key) const;
};

/// Stable field order: name, statistic, tolerance, pass, metadata.
std::string to_json(const VerificationReport& report);
std::string to_json(const std::vector<VerificationReport>& reports);

/// Shortest round-trip decimal form of x ("nan", "inf", "-inf" for non-finite).
std::string format_double(double x);

}  // namespace tempertail::estimation
