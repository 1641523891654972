#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "tempertail/estimation.hpp"
#include "tempertail/models.hpp"
#include "tempertail/rng.hpp"
#include "tempertail/samplers.hpp"

namespace tempertail::shortsell {

/// S = Sum_{j <= nu} P_j X_j: nu geometric with success probability p,
/// order sizes X_j from a Sibuya-family law, prices P_j positive, all
/// independent. `threshold` is the resale price P* used by the profit bound.
struct ShortSellConfig {
  double p = 0.3;
  models::ModelSpec orders = models::Sibuya{0.5};
  models::ModelSpec prices = models::Exponential{1.0};
  double threshold = 0.0;
};

/// p in (0,1]; orders Sibuya, TruncSibuya or TemperedSibuya; prices a
/// positive law with a Laplace transform; threshold >= 0 and finite.
void validate(const ShortSellConfig& cfg);

/// Exponential prices with scale a and untruncated Sibuya orders.
bool has_closed_form(const ShortSellConfig& cfg);

/// L_PX(s) = Sum_k pmf(k) L_P(sk), summed directly for k <= 2*10^4 (stopping
/// early once P{X > K} L_P(sK) < 1e-12) and completed by an Euler-Maclaurin
/// estimate of the remaining terms.
double analytic_lpx(double s, const models::ModelSpec& prices, const models::ModelSpec& orders);
/// 1 - L_PX(s), summed as Sum_k pmf(k) (1 - L_P(sk)) to keep small s accurate.
double analytic_lpx_complement(double s, const models::ModelSpec& prices,
                               const models::ModelSpec& orders);

/// Exponential prices (scale a), Sibuya(gamma) orders:
/// 1 - L_PX = Gamma(1+gamma) Gamma(1+x) / Gamma(1+gamma+x), x = 1/(a s).
double lpx_closed_form_complement(double s, double a, double gamma);
double lpx_closed_form(double s, double a, double gamma);

/// L_S = p L_PX / (1 - (1-p) L_PX) from the generic series.
double analytic_ls(double s, const ShortSellConfig& cfg);
/// 1 - L_S = C / (p + (1-p) C) with C = 1 - L_PX, from the generic series.
double analytic_ls_complement(double s, const ShortSellConfig& cfg);
/// The same two quantities from the gamma-function closed form; throws
/// ValidationError unless has_closed_form(cfg).
double closed_form_ls(double s, const ShortSellConfig& cfg);
double closed_form_ls_complement(double s, const ShortSellConfig& cfg);

/// lim_{s->0} (1 - L_S(s)) / s^gamma = a^gamma Gamma(1+gamma) / p, when
/// has_closed_form(cfg).
std::optional<double> tail_constant(const ShortSellConfig& cfg);

/// n draws of S.
samplers::SampleBatch simulate_revenue(const ShortSellConfig& cfg, std::size_t n,
                                       const RngState& rng);
/// n draws of Sum_{j <= nu} (P_j - P*) X_j; with the same seed and P* = 0 this
/// equals simulate_revenue exactly.
samplers::SampleBatch simulate_profit_bound(const ShortSellConfig& cfg, std::size_t n,
                                            const RngState& rng);

struct TailReport {
  /// Hill estimate of the tail order and its standard error.
  estimation::TailEstimate hill;
  estimation::CurvatureFit curvature;
  /// Tail order the order law implies: gamma for Sibuya orders, none for the
  /// truncated and tempered laws.
  std::optional<double> expected_order;
  std::optional<double> analytic_tail_constant;
  double tolerance = 0.0;
  /// Sibuya orders: |hill - gamma| <= tolerance and the tail is power-like.
  /// Truncated or tempered orders: the tail is lighter than any power.
  bool pass = false;
};

inline constexpr std::size_t kTailReportMinN = 100'000;

/// Simulate S and summarize its upper tail. Requires n >= 10^5.
TailReport tail_report(const ShortSellConfig& cfg, std::size_t n, const RngState& rng,
                       double tolerance = 0.07);

}  // namespace tempertail::shortsell
