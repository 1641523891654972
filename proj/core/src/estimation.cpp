#include "tempertail/estimation.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <json.hpp>

#include "tempertail/errors.hpp"

namespace tempertail::estimation {
namespace {

using models::TransformKind;
using Json = nlohmann::ordered_json;

std::vector<double> sorted_copy(std::span<const double> samples) {
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  return sorted;
}

void require_nonempty(std::span<const double> samples, std::string_view what) {
  if (samples.empty()) throw ValidationError(std::string(what) + ": empty sample");
}

double ls_slope(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

Json report_json(const VerificationReport& report) {
  Json j;
  j["name"] = report.name;
  j["statistic"] = report.statistic;
  j["tolerance"] = report.tolerance;
  j["pass"] = report.pass;
  Json meta = Json::object();
  for (const auto& [key, value] : report.metadata) meta[key] = value;
  j["metadata"] = std::move(meta);
  return j;
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), end);
}

std::size_t default_hill_k(std::size_t n) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n)))));
}

TailEstimate hill(std::span<const double> samples, std::size_t k) {
  const std::size_t n = samples.size();
  if (k < 1 || k >= n) throw ValidationError("hill: k must satisfy 1 <= k < n");
  for (double x : samples) {
    if (!(x > 0.0)) throw ValidationError("hill: samples must be positive");
  }
  std::vector<double> top(samples.begin(), samples.end());
  std::nth_element(top.begin(), top.begin() + static_cast<std::ptrdiff_t>(k), top.end(),
                   std::greater<>());
  const double threshold = top[k];  // x_(n-k)
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) sum += std::log(top[i] / threshold);
  const double mean = sum / static_cast<double>(k);
  if (!(mean > 0.0)) throw ValidationError("hill: top order statistics are tied");
  const double index = 1.0 / mean;
  return {index, k, index / std::sqrt(static_cast<double>(k))};
}

TailEstimate hill(std::span<const double> samples) {
  return hill(samples, default_hill_k(samples.size()));
}

EmpiricalTransform empirical_transform(std::span<const double> samples, TransformKind kind,
                                       const std::vector<double>& points) {
  require_nonempty(samples, "empirical_transform");
  if (kind != TransformKind::CF && kind != TransformKind::PGF && kind != TransformKind::LT) {
    throw ValidationError("empirical_transform: kind must be cf, pgf or lt");
  }
  // Reuse the query validation for the points.
  const models::TransformQuery query(kind, points);
  for (double x : samples) {
    if (kind == TransformKind::PGF && !(x >= 0.0 && std::floor(x) == x)) {
      throw ValidationError("empirical_transform: PGF needs integer samples >= 0");
    }
    if (kind == TransformKind::LT && !(x >= 0.0)) {
      throw ValidationError("empirical_transform: LT needs samples >= 0");
    }
  }

  const double n = static_cast<double>(samples.size());
  EmpiricalTransform out{kind, points, {}, {}};
  for (double point : points) {
    auto term = [&](double x) -> std::complex<double> {
      switch (kind) {
        case TransformKind::CF: return std::polar(1.0, point * x);
        case TransformKind::PGF: return point == 0.0 ? 0.0 : std::exp(x * std::log(point));
        default: return std::exp(-point * x);
      }
    };
    std::complex<double> mean = 0.0;
    for (double x : samples) mean += term(x);
    mean /= n;
    double ss = 0.0;
    for (double x : samples) ss += std::norm(term(x) - mean);
    const double variance = samples.size() > 1 ? ss / (n - 1.0) : 0.0;
    out.values.push_back(mean);
    out.std_errors.push_back(std::sqrt(variance / n));
  }
  return out;
}

double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf) {
  require_nonempty(samples, "ks_distance");
  const std::vector<double> sorted = sorted_copy(samples);
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t first = 0; first < sorted.size();) {
    std::size_t last = first;
    while (last + 1 < sorted.size() && sorted[last + 1] == sorted[first]) ++last;
    const double f = cdf(sorted[first]);
    d = std::max({d, static_cast<double>(last + 1) / n - f, f - static_cast<double>(first) / n});
    first = last + 1;
  }
  return std::clamp(d, 0.0, 1.0);
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  require_nonempty(a, "ks_two_sample");
  require_nonempty(b, "ks_two_sample");
  const std::vector<double> x = sorted_copy(a);
  const std::vector<double> y = sorted_copy(b);
  const double n = static_cast<double>(x.size());
  const double m = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  return d;
}

double ks_coefficient(double level) {
  if (!(level > 0.0 && level < 1.0)) throw ValidationError("ks: level must lie in (0,1)");
  return std::sqrt(-0.5 * std::log(level / 2.0));
}

double ks_critical(double level, std::size_t n) {
  return ks_coefficient(level) / std::sqrt(static_cast<double>(n));
}

double ks_critical_two_sample(double level, std::size_t n, std::size_t m) {
  const double nd = static_cast<double>(n), md = static_cast<double>(m);
  return ks_coefficient(level) * std::sqrt((nd + md) / (nd * md));
}

std::string_view to_string(TailClass cls) {
  return cls == TailClass::PowerLike ? "power-like" : "lighter-than-power";
}

std::vector<double> default_curvature_grid(std::span<const double> samples) {
  require_nonempty(samples, "survival_curvature");
  const std::vector<double> sorted = sorted_copy(samples);
  const std::size_t n = sorted.size();
  const std::size_t keep = std::max<std::size_t>(kMinTailPoints, n / 1000);
  const std::size_t lo_index = static_cast<std::size_t>(0.9 * static_cast<double>(n));
  if (keep + 1 > n || lo_index >= n - keep) {
    throw ValidationError("survival_curvature: fewer than 100 tail points");
  }
  const double lo = sorted[lo_index];
  const double hi = sorted[n - keep - 1];
  if (!(lo > 0.0) || !(hi > lo)) {
    throw ValidationError("survival_curvature: no positive spread in the upper tail");
  }
  constexpr int kPoints = 40;
  std::vector<double> grid(kPoints);
  const double log_lo = std::log(lo), log_hi = std::log(hi);
  for (int i = 0; i < kPoints; ++i) {
    grid[i] = std::exp(log_lo + (log_hi - log_lo) * i / (kPoints - 1));
  }
  grid.back() = hi;
  return grid;
}

CurvatureFit survival_curvature(std::span<const double> samples, std::vector<double> grid) {
  require_nonempty(samples, "survival_curvature");
  if (grid.empty()) grid = default_curvature_grid(samples);
  if (grid.size() < 2 * kCurvatureWindows) {
    throw ValidationError("survival_curvature: grid needs at least 8 points");
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || (i > 0 && !(grid[i] > grid[i - 1]))) {
      throw ValidationError("survival_curvature: grid must be positive and increasing");
    }
  }
  const std::vector<double> sorted = sorted_copy(samples);
  const double n = static_cast<double>(sorted.size());
  auto above = [&](double x) {
    return static_cast<std::size_t>(sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), x));
  };
  CurvatureFit fit;
  fit.tail_points = above(grid.front());
  if (fit.tail_points < kMinTailPoints) {
    throw ValidationError("survival_curvature: fewer than 100 tail points");
  }
  if (above(grid.back()) == 0) {
    throw ValidationError("survival_curvature: grid extends beyond the sample maximum");
  }
  std::vector<double> log_x, log_s;
  for (double x : grid) {
    log_x.push_back(std::log(x));
    log_s.push_back(std::log(static_cast<double>(above(x)) / n));
  }
  fit.slope = ls_slope(log_x, log_s);
  const std::size_t width = grid.size() / kCurvatureWindows;
  for (std::size_t w = 0; w < kCurvatureWindows; ++w) {
    const std::size_t begin = w * width;
    const std::size_t end = w + 1 == kCurvatureWindows ? grid.size() : begin + width;
    fit.slopes.push_back(ls_slope(std::span(log_x).subspan(begin, end - begin),
                                  std::span(log_s).subspan(begin, end - begin)));
  }
  const auto [lo, hi] = std::minmax_element(fit.slopes.begin(), fit.slopes.end());
  fit.spread = *hi - *lo;
  fit.classification =
      fit.spread < kCurvatureSpread ? TailClass::PowerLike : TailClass::LighterThanPower;
  return fit;
}

VerificationReport VerificationReport::make(std::string name, double statistic, double tolerance) {
  VerificationReport report;
  report.name = std::move(name);
  report.statistic = statistic;
  report.tolerance = tolerance;
  report.pass = statistic <= tolerance;
  return report;
}

VerificationReport& VerificationReport::with(std::string key, std::string value) {
  for (auto& [k, v] : metadata) {
    if (k == key) {
      v = std::move(value);
      return *this;
    }
  }
  metadata.emplace_back(std::move(key), std::move(value));
  return *this;
}

VerificationReport& VerificationReport::with(std::string key, double value) {
  return with(std::move(key), format_double(value));
}

std::string VerificationReport::get(std::string_view key) const {
  for (const auto& [k, v] : metadata) {
    if (k == key) return v;
  }
  return {};
}

std::string to_json(const VerificationReport& report) { return report_json(report).dump(2); }

std::string to_json(const std::vector<VerificationReport>& reports) {
  Json array = Json::array();
  for (const auto& report : reports) array.push_back(report_json(report));
  return array.dump(2);
}

}  // namespace tempertail::estimation
