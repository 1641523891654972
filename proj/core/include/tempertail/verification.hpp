#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tempertail/estimation.hpp"

namespace tempertail::verification {

/// Options shared by every suite. `n` overrides the Monte-Carlo sample size of
/// every randomized check; analytic checks ignore it.
struct SuiteOptions {
  std::uint64_t seed = 20240613;
  std::optional<std::size_t> n;
};

/// normalization, limits, mc-transforms, lepage, pareto, shortsell, tempering,
/// tails, all.
std::span<const std::string_view> suite_names();

/// Run a named suite. Throws ValidationError for an unknown name or n < 1.
///
/// Each report's metadata carries "n", "seed" and the check parameters.
/// Reports that back one of the numbered acceptance checks also carry
/// "criterion" ("1".."10").
///
/// When n is below the size a check was calibrated for, the report is marked
/// "underpowered" with "required_n": standard-error checks keep the
/// tolerance the calibrated size would give (4 sigma / sqrt(required_n)), and
/// fixed-band checks get tolerance -1, which no statistic meets, so they fail
/// instead of passing on noise.
/// A check that throws becomes a failing report with an "error" entry.
std::vector<estimation::VerificationReport> run_suite(std::string_view name,
                                                      const SuiteOptions& options = {});

}  // namespace tempertail::verification
