#include "tempertail/special.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/sin_pi.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "tempertail/errors.hpp"

namespace tempertail::special {
namespace bm = boost::math;

double SignedLog::value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }

SignedLog binomial(double x, std::int64_t k) {
  if (k < 0) throw ValidationError("binomial: k must be >= 0");
  if (k == 0) return {1, 0.0};
  const double kd = static_cast<double>(k);
  const bool x_is_integer = std::floor(x) == x;
  if (x_is_integer && x >= 0.0 && kd > x) return {0, 0.0};
  if (x_is_integer && x < 0.0) {
    // C(-m, k) = (-1)^k C(m+k-1, k)
    const double m = -x;
    const double log_abs = std::lgamma(m + kd) - std::lgamma(kd + 1.0) - std::lgamma(m);
    return {(k % 2 == 0) ? 1 : -1, log_abs};
  }
  if (kd < x + 1.0) {
    int s1 = 1, s2 = 1;
    const double l1 = bm::lgamma(x + 1.0, &s1);
    const double l2 = bm::lgamma(x - kd + 1.0, &s2);
    return {s1 * s2, l1 - std::lgamma(kd + 1.0) - l2};
  }
  // k >= x+1, x non-integer: reflect Gamma(x-k+1) so the k-dependence is a
  // single well-conditioned ratio Gamma(k-x)/Gamma(k+1).
  int s1 = 1;
  const double l1 = bm::lgamma(x + 1.0, &s1);
  const double sin_term = bm::sin_pi(x);
  const int sign_sin = sin_term > 0 ? 1 : -1;
  const int sign_k = (k % 2 == 1) ? 1 : -1;  // (-1)^{k+1}
  const double ratio = bm::tgamma_delta_ratio(kd - x, x + 1.0);
  return {s1 * sign_sin * sign_k,
          l1 + std::log(std::abs(sin_term)) - std::log(std::numbers::pi) + std::log(ratio)};
}

double sibuya_pmf(double gamma, double k) {
  if (k < 1.0) return 0.0;
  if (gamma == 1.0) return k == 1.0 ? 1.0 : 0.0;
  return gamma / bm::tgamma(1.0 - gamma) * bm::tgamma_delta_ratio(k - gamma, 1.0 + gamma);
}

double sibuya_survival(double gamma, double k) {
  if (k <= 0.0) return 1.0;
  if (gamma == 1.0) return 0.0;
  return bm::tgamma_delta_ratio(k + 1.0 - gamma, gamma) / bm::tgamma(1.0 - gamma);
}

double walk_fpt_survival(double k) {
  if (k <= 0.0) return 1.0;
  return bm::tgamma_delta_ratio(k + 0.5, 0.5) / std::sqrt(std::numbers::pi);
}

double invert_survival(const std::function<double(double)>& survival, double u,
                       double known_lower) {
  double lo = std::max(0.0, std::floor(known_lower));  // survival(lo) >= u
  if (lo == 0.0) {
    if (survival(1.0) < u) return 1.0;
    lo = 1.0;
  }
  // Bracket with steps 1, 2, 4, ... above lo, so a close known_lower is cheap.
  double step = 1.0;
  double hi = lo + step;
  constexpr double kCeiling = 1e300;
  while (survival(hi) >= u) {
    lo = hi;
    step *= 2.0;
    hi = lo + step;
    if (hi > kCeiling) return kCeiling;
  }
  while (hi - lo > 1.0 && hi > lo * (1.0 + 0x1.0p-52)) {
    const double mid = std::floor(lo + (hi - lo) / 2.0);
    if (mid <= lo || mid >= hi) break;
    if (survival(mid) < u) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  if (a == b) return 0.0;
  return bm::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 20, rel_tol);
}

double integrate_singular(const std::function<double(double)>& f, double a, double b,
                          double rel_tol) {
  if (a == b) return 0.0;
  static thread_local bm::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate(f, a, b, rel_tol);
}

double integrate_fixed(const std::function<double(double)>& f, double a, double b) {
  if (a == b) return 0.0;
  return bm::quadrature::gauss<double, 30>::integrate(f, a, b);
}

double gamma_ratio(double a, double delta) { return bm::tgamma_delta_ratio(a, delta); }

}  // namespace tempertail::special
