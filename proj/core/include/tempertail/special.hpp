#pragma once

#include <cstdint>
#include <functional>

namespace tempertail::special {

/// Generalized binomial coefficient C(x, k) for real x and integer k >= 0,
/// held as sign * exp(log_abs). sign is 0 when the coefficient vanishes
/// (x a non-negative integer smaller than k).
struct SignedLog {
  int sign = 0;
  double log_abs = 0.0;
  double value() const;
};

SignedLog binomial(double x, std::int64_t k);

/// (-1)^{k+1} C(gamma, k) = gamma/k * prod_{i<k} (1 - gamma/i), the Sibuya
/// probability of k. Valid for gamma in (0,1].
double sibuya_pmf(double gamma, double k);

/// P{X > k} = prod_{i<=k} (1 - gamma/i) = Gamma(k+1-gamma) / (Gamma(1-gamma) Gamma(k+1)).
/// k may be any real >= 0 (the gamma-ratio form is used off the integers).
double sibuya_survival(double gamma, double k);

/// Unbiased +-1 walk started at 0: P{T > 2k-1} = C(2k,k) 4^{-k}, k >= 0.
double walk_fpt_survival(double k);

/// Smallest integer k >= 1 with survival(k) < u, for a nonincreasing survival
/// function with survival(0) = 1 and u in (0,1). Exponential bracketing then
/// bisection: O(log k) calls. Beyond 2^53 the result is exact only to the
/// double spacing at that magnitude. A caller that already knows
/// survival(m) >= u for some integer m >= 1 may pass it as known_lower.
double invert_survival(const std::function<double(double)>& survival, double u,
                       double known_lower = 0.0);

/// Adaptive Gauss-Kronrod (15-point) on a finite interval.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-12);

/// Tanh-sinh on [a,b]; tolerates integrable endpoint singularities.
double integrate_singular(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-12);

/// Fixed 30-point Gauss-Legendre rule; b may be +infinity. For smooth
/// integrands inside another adaptive integral. On an infinite range the
/// rule is applied after a rational map and is good to about 1e-9 for e^{-x}.
double integrate_fixed(const std::function<double(double)>& f, double a, double b);

/// Gamma(a)/Gamma(a+delta) without overflow.
double gamma_ratio(double a, double delta);

}  // namespace tempertail::special
