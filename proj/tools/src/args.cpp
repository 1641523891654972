#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <utility>
#include <variant>

#include <openssl/evp.h>

#include "cli.hpp"
#include "tempertail/errors.hpp"

namespace tempertail::cli {
namespace {

using models::Params;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::string canonical_key(std::string_view key) {
  std::string out(trim(key));
  std::replace(out.begin(), out.end(), '-', '_');
  return out;
}

using Slot = std::variant<double*, std::int64_t*>;
struct Field {
  std::string_view key;
  Slot slot;
};

std::vector<Field> fields(Params& params) {
  using namespace models;
  return std::visit(
      [](auto& m) -> std::vector<Field> {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Levy>) return {{"sigma", &m.sigma}};
        else if constexpr (std::is_same_v<T, InverseGaussian>) return {{"lambda", &m.lambda}, {"mu", &m.mu}};
        else if constexpr (std::is_same_v<T, PositiveStable>) return {{"alpha", &m.alpha}, {"scale", &m.scale}};
        else if constexpr (std::is_same_v<T, TemperedPositiveStable>)
          return {{"alpha", &m.alpha}, {"scale", &m.scale}, {"tilt", &m.tilt}};
        else if constexpr (std::is_same_v<T, SubGaussian>) return {{"alpha", &m.alpha}};
        else if constexpr (std::is_same_v<T, TemperedSubGaussian>) return {{"alpha", &m.alpha}, {"tilt", &m.tilt}};
        else if constexpr (std::is_same_v<T, TruncSubGaussian>) return {{"alpha", &m.alpha}, {"bound", &m.bound}};
        else if constexpr (std::is_same_v<T, TemperedStableMix>)
          return {{"alpha", &m.alpha}, {"beta", &m.beta}, {"tilt", &m.tilt}};
        else if constexpr (std::is_same_v<T, Cts>)
          return {{"c1", &m.c1},         {"c2", &m.c2},       {"lambda_plus", &m.lambda_plus},
                  {"lambda_minus", &m.lambda_minus}, {"alpha", &m.alpha}, {"mu", &m.mu}};
        else if constexpr (std::is_same_v<T, WalkFpt>) return {};
        else if constexpr (std::is_same_v<T, BiasedWalkFpt>) return {{"p", &m.p}};
        else if constexpr (std::is_same_v<T, TruncWalkFpt>) return {{"budget", &m.budget}};
        else if constexpr (std::is_same_v<T, Sibuya>) return {{"gamma", &m.gamma}};
        else if constexpr (std::is_same_v<T, TruncSibuya>) return {{"gamma", &m.gamma}, {"bound", &m.bound}};
        else if constexpr (std::is_same_v<T, TemperedSibuya>) return {{"gamma", &m.gamma}, {"tilt", &m.tilt}};
        else if constexpr (std::is_same_v<T, Geometric>) return {{"p", &m.p}};
        else if constexpr (std::is_same_v<T, TruncGeometric>) return {{"p", &m.p}, {"bound", &m.bound}};
        else if constexpr (std::is_same_v<T, Pareto>) return {{"shape", &m.shape}};
        else return {{"scale", &m.scale}};
      },
      params);
}

template <std::size_t... I>
Params default_params(std::size_t index, std::index_sequence<I...>) {
  static constexpr std::array<Params (*)(), sizeof...(I)> kMake = {
      +[]() -> Params { return std::variant_alternative_t<I, Params>{}; }...};
  return kMake[index]();
}

Params default_params(std::string_view name) {
  const auto names = models::model_names();
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) {
    std::string known;
    for (auto n : names) known += (known.empty() ? "" : ", ") + std::string(n);
    throw ValidationError("unknown model '" + std::string(name) + "' (known: " + known + ")");
  }
  return default_params(static_cast<std::size_t>(it - names.begin()),
                        std::make_index_sequence<std::variant_size_v<Params>>{});
}

void assign(std::string_view model, Params& params, const std::string& key, std::string_view value) {
  auto list = fields(params);
  const auto it = std::find_if(list.begin(), list.end(), [&](const Field& f) { return f.key == key; });
  if (it == list.end()) {
    std::string known;
    for (const auto& f : list) known += (known.empty() ? "" : ", ") + std::string(f.key);
    throw ValidationError(std::string(model) + " has no parameter '" + key + "'" +
                          (known.empty() ? " (it takes none)" : " (parameters: " + known + ")"));
  }
  const double x = parse_number(value);
  if (auto* d = std::get_if<double*>(&it->slot)) {
    **d = x;
    return;
  }
  if (x != std::floor(x) || !(std::abs(x) < 9.0e15)) {
    throw ValidationError(std::string(model) + ": " + key + " must be an integer");
  }
  *std::get<std::int64_t*>(it->slot) = static_cast<std::int64_t>(x);
}

}  // namespace

double parse_number(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double x = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size()) {
    throw ValidationError("not a number: '" + std::string(text) + "'");
  }
  return x;
}

std::size_t parse_count(std::string_view text) {
  const double x = parse_number(text);
  if (!(x >= 1.0) || x != std::floor(x) || x > 9.0e15) {
    throw ValidationError("n must be a positive integer, got '" + std::string(trim(text)) + "'");
  }
  return static_cast<std::size_t>(x);
}

std::vector<double> parse_points(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw ValidationError("points: empty list");
  std::vector<std::string_view> parts;
  const char sep = text.find(':') != std::string_view::npos ? ':' : ',';
  for (std::size_t start = 0;;) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  std::vector<double> points;
  if (sep == ',') {
    for (auto p : parts) points.push_back(parse_number(p));
    return points;
  }
  if (parts.size() != 3) throw ValidationError("points: range form is start:stop:count");
  const double lo = parse_number(parts[0]);
  const double hi = parse_number(parts[1]);
  const std::size_t count = parse_count(parts[2]);
  if (count == 1) return {lo};
  for (std::size_t i = 0; i < count; ++i) {
    points.push_back(i + 1 == count ? hi
                                    : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  return points;
}

models::ModelSpec parse_model(std::string_view text, const std::map<std::string, std::string>& overrides) {
  text = trim(text);
  std::string_view name = text;
  std::string_view body;
  if (const auto open = text.find('('); open != std::string_view::npos) {
    if (text.back() != ')') throw ValidationError("model '" + std::string(text) + "': missing ')'");
    name = trim(text.substr(0, open));
    body = text.substr(open + 1, text.size() - open - 2);
  }
  Params params = default_params(name);
  if (!trim(body).empty()) {
    for (std::size_t start = 0;;) {
      const auto comma = body.find(',', start);
      const auto item = body.substr(start, comma == std::string_view::npos ? comma : comma - start);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) {
        throw ValidationError("model '" + std::string(text) + "': expected key=value, got '" +
                              std::string(trim(item)) + "'");
      }
      assign(name, params, canonical_key(item.substr(0, eq)), item.substr(eq + 1));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
  }
  for (const auto& [key, value] : overrides) assign(name, params, canonical_key(key), value);
  return models::ModelSpec(std::move(params));
}

std::vector<std::string> model_keys(std::string_view name) {
  Params params = default_params(name);
  std::vector<std::string> keys;
  for (const auto& f : fields(params)) keys.emplace_back(f.key);
  return keys;
}

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 15];
  }
  return out;
}

}  // namespace tempertail::cli
