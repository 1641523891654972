#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "tempertail/models.hpp"

namespace tempertail::cli {

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitUsage = 2;

/// Run one command line (without the program name). Results go to `out`
/// unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "sibuya" or "sibuya(gamma=0.5)", the form ModelSpec::describe() prints.
/// `overrides` (keys as in describe(), '-' and '_' interchangeable) win over
/// values in the text. Throws ValidationError on unknown names or keys.
models::ModelSpec parse_model(std::string_view text,
                              const std::map<std::string, std::string>& overrides = {});

/// Parameter keys of a model, in describe() order.
std::vector<std::string> model_keys(std::string_view name);

/// "0,0.5,1" or "start:stop:count" (count evenly spaced points).
std::vector<double> parse_points(std::string_view text);

/// Positive integer count; accepts "1000" and "1e6".
std::size_t parse_count(std::string_view text);

/// Strict decimal parse of the whole string.
double parse_number(std::string_view text);

/// Lower-case hex SHA-256.
std::string sha256_hex(std::string_view data);

}  // namespace tempertail::cli
