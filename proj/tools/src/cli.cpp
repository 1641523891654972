#include "cli.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tempertail/errors.hpp"
#include "tempertail/estimation.hpp"
#include "tempertail/lepage.hpp"
#include "tempertail/products.hpp"
#include "tempertail/rng.hpp"
#include "tempertail/samplers.hpp"
#include "tempertail/shortsell.hpp"
#include "tempertail/tempering.hpp"
#include "tempertail/verification.hpp"

namespace tempertail::cli {
namespace {

using json = nlohmann::ordered_json;
using estimation::format_double;

constexpr std::uint64_t kDefaultSeed = 20240613;
constexpr std::string_view kVersion = "0.1.0";

// Model parameter flags; the key is the flag without dashes.
constexpr std::array<std::string_view, 16> kModelFlags = {
    "sigma", "lambda", "mu", "alpha", "scale", "tilt", "beta", "bound",
    "c1", "c2", "lambda-plus", "lambda-minus", "p", "budget", "gamma", "shape"};

struct Common {
  std::uint64_t seed = kDefaultSeed;
  std::string n;
  std::string out = "-";
  std::string manifest;
  std::string format;
};

void add_common(CLI::App* app, Common& c, bool with_n = true) {
  app->add_option("--seed", c.seed, "RNG seed")->capture_default_str();
  if (with_n) app->add_option("--n", c.n, "Sample size, e.g. 1000 or 1e6");
  app->add_option("--out", c.out, "Output file, '-' for stdout")->capture_default_str();
  app->add_option("--manifest", c.manifest,
                  "Manifest path (default <out>.manifest.json, 'none' to skip)");
  app->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

// Shared by every subcommand that takes model flags; only one subcommand
// parses per run.
struct ModelFlags {
  std::vector<std::pair<std::string, CLI::Option*>> options;
  std::map<std::string, std::string> values;

  void add(CLI::App* app, std::initializer_list<std::string_view> skip = {}) {
    for (auto key : kModelFlags) {
      if (std::find(skip.begin(), skip.end(), key) != skip.end()) continue;
      const std::string k(key);
      options.emplace_back(k, app->add_option("--" + k, values[k], "Model parameter " + k));
    }
  }
  std::map<std::string, std::string> given() const {
    std::map<std::string, std::string> out;
    for (const auto& [k, opt] : options) {
      if (opt->count() > 0) out[k] = values.at(k);
    }
    return out;
  }
};

std::size_t count_or(const std::string& text, std::size_t fallback) {
  return text.empty() ? fallback : parse_count(text);
}

std::string values_csv(const std::vector<double>& values) {
  std::string s = "index,value\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    s += std::to_string(i);
    s += ',';
    s += format_double(values[i]);
    s += '\n';
  }
  return s;
}

std::string values_json(const std::vector<double>& values) {
  json rows = json::array();
  for (std::size_t i = 0; i < values.size(); ++i) rows.push_back({{"index", i}, {"value", values[i]}});
  return rows.dump(2) + "\n";
}

std::string points_csv(const std::vector<double>& points, const std::vector<std::complex<double>>& values) {
  std::string s = "point,re,im\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    s += format_double(points[i]) + ',' + format_double(values[i].real()) + ',' +
         format_double(values[i].imag()) + '\n';
  }
  return s;
}

std::string points_json(const std::vector<double>& points, const std::vector<std::complex<double>>& values) {
  json rows = json::array();
  for (std::size_t i = 0; i < points.size(); ++i) {
    rows.push_back({{"point", points[i]}, {"re", values[i].real()}, {"im", values[i].imag()}});
  }
  return rows.dump(2) + "\n";
}

/// "name" or "name(k=v, ...)" for laws outside the model registry.
std::pair<std::string, std::map<std::string, std::string>> split_law(std::string_view text) {
  std::string s(text);
  std::map<std::string, std::string> kv;
  const auto open = s.find('(');
  if (open == std::string::npos) return {s, kv};
  if (s.back() != ')') throw ValidationError("'" + s + "': missing ')'");
  std::stringstream body(s.substr(open + 1, s.size() - open - 2));
  for (std::string item; std::getline(body, item, ',');) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ValidationError("'" + s + "': expected key=value");
    auto key = item.substr(0, eq);
    key.erase(std::remove(key.begin(), key.end(), ' '), key.end());
    kv[key] = item.substr(eq + 1);
  }
  return {s.substr(0, open), kv};
}

double take(std::map<std::string, std::string>& kv, const std::string& key, double fallback) {
  const auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  const double x = parse_number(it->second);
  kv.erase(it);
  return x;
}

void require_consumed(const std::string& name, const std::map<std::string, std::string>& kv) {
  if (!kv.empty()) throw ValidationError(name + " has no parameter '" + kv.begin()->first + "'");
}

lepage::MultiplierLaw parse_multiplier(const std::string& text) {
  auto [name, kv] = split_law(text);
  if (name == "constant") {
    const lepage::ConstantMultiplier m{take(kv, "value", 1.0)};
    require_consumed(name, kv);
    return m;
  }
  if (name == "rademacher") {
    const lepage::RademacherMultiplier m{take(kv, "magnitude", 1.0)};
    require_consumed(name, kv);
    return m;
  }
  return parse_model(text);
}

products::PositiveLaw parse_positive_law(const std::string& text) {
  auto [name, kv] = split_law(text);
  if (name == "lognormal") {
    const products::LogNormal m{take(kv, "mean", 1.0), take(kv, "sd", 1.0)};
    require_consumed(name, kv);
    return m;
  }
  if (name == "degenerate") {
    const products::Degenerate m{take(kv, "value", std::numbers::e)};
    require_consumed(name, kv);
    return m;
  }
  return parse_model(text);
}

// ---------------------------------------------------------------------------
// Output and manifests.
// ---------------------------------------------------------------------------

struct Context {
  std::vector<std::string> args;
  std::ostream& out;
  std::ostream& err;
};

std::vector<std::string> replay_args(const std::vector<std::string>& args) {
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const auto& a = args[i];
    if (a == "--out" || a == "--manifest") {
      ++i;
      continue;
    }
    if (a.rfind("--out=", 0) == 0 || a.rfind("--manifest=", 0) == 0) continue;
    kept.push_back(a);
  }
  return kept;
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot open '" + path + "' for writing");
  f << body;
  if (!f.flush()) throw std::runtime_error("failed writing '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

int emit(const Context& ctx, const Common& common, const std::string& body, json parameters,
         int code = kExitOk) {
  if (common.out == "-") {
    ctx.out << body;
    return code;
  }
  write_file(common.out, body);
  if (common.manifest == "none") return code;
  json manifest;
  manifest["tool"] = "tempertail";
  manifest["version"] = kVersion;
  manifest["subcommand"] = ctx.args.empty() ? "" : ctx.args.front();
  manifest["args"] = replay_args(ctx.args);
  manifest["parameters"] = std::move(parameters);
  manifest["seed"] = common.seed;
  manifest["rng"] = Rng::kAlgorithm;
  manifest["outputs"] = json::array({{{"path", common.out}, {"sha256", sha256_hex(body)}}});
  const auto path = common.manifest.empty() ? common.out + ".manifest.json" : common.manifest;
  write_file(path, manifest.dump(2) + "\n");
  return code;
}

bool want_json(const Common& c, bool json_default = false) {
  return c.format.empty() ? json_default : c.format == "json";
}

// ---------------------------------------------------------------------------
// Shared model surface: sample or evaluate a transform.
// ---------------------------------------------------------------------------

struct EmitRequest {
  std::string kind;
  std::string points;
  bool sample = false;
};

int emit_model(const Context& ctx, const Common& common, const models::ModelSpec& model,
               const EmitRequest& req, json parameters) {
  parameters["model"] = model.describe();
  if (req.sample) {
    const std::size_t n = count_or(common.n, 1000);
    const auto batch = samplers::sample(model, n, RngState{common.seed, 0});
    parameters["n"] = n;
    return emit(ctx, common, want_json(common) ? values_json(batch.values) : values_csv(batch.values),
                std::move(parameters));
  }
  if (req.points.empty()) throw ValidationError("--points is required with --kind/--emit");
  const auto kind = models::parse_transform_kind(req.kind);
  const auto points = parse_points(req.points);
  const auto result = models::evaluate(model, models::TransformQuery(kind, points));
  parameters["kind"] = std::string(models::to_string(kind));
  parameters["points"] = req.points;
  return emit(ctx, common,
              want_json(common) ? points_json(points, result.values) : points_csv(points, result.values),
              std::move(parameters));
}

// ---------------------------------------------------------------------------
// Subcommands.
// ---------------------------------------------------------------------------

struct Commands {
  Common common;
  ModelFlags flags;
  std::string model;
  EmitRequest request;

  // temper
  std::optional<double> tilt, truncate, drift, sibuya_temper, v1, v2, v3;
  std::optional<double> v2_beta;
  std::optional<std::int64_t> walk_budget, count_bound, sibuya_bound;

  // lepage
  std::string scenario = "generic";
  std::optional<double> alpha;
  std::optional<std::int64_t> terms;
  std::string multiplier;

  // pareto
  double p = 0.5;
  std::optional<std::int64_t> count_trunc;
  bool check = false;
  double threshold = 0.05;

  // shortsell
  double ss_p = 0.3;
  double gamma = 0.5;
  double a = 1.0;
  std::string orders, prices;
  double price_threshold = 0.0;
  bool closed_form = false;
  double tolerance = 0.07;

  // verify
  std::string suite;

  // estimate
  std::string input, method = "hill";
  std::optional<std::size_t> k;

  // replay
  std::string manifest_in;
  std::string replay_out;
};

int cmd_sample(const Context& ctx, Commands& c) {
  const auto model = parse_model(c.model, c.flags.given());
  return emit_model(ctx, c.common, model, {"", "", true}, json::object());
}

int cmd_transform(const Context& ctx, Commands& c) {
  const auto model = parse_model(c.model, c.flags.given());
  return emit_model(ctx, c.common, model, c.request, json::object());
}

int cmd_temper(const Context& ctx, Commands& c) {
  const auto base = parse_model(c.model, c.flags.given());
  std::vector<tempering::TemperingSpec> specs;
  if (c.tilt) specs.emplace_back(tempering::ExponentialTilt{*c.tilt});
  if (c.truncate) specs.emplace_back(tempering::Truncate{*c.truncate});
  if (c.drift) specs.emplace_back(tempering::DriftWalk{*c.drift});
  if (c.walk_budget) specs.emplace_back(tempering::TruncateWalk{*c.walk_budget});
  if (c.count_bound) specs.emplace_back(tempering::CountTruncate{*c.count_bound});
  if (c.sibuya_bound) specs.emplace_back(tempering::SibuyaTruncate{*c.sibuya_bound});
  if (c.sibuya_temper) specs.emplace_back(tempering::SibuyaTemper{*c.sibuya_temper});
  if (c.v1) specs.emplace_back(tempering::SubGaussianV1{*c.v1});
  if (c.v2) specs.emplace_back(tempering::SubGaussianV2{c.v2_beta.value_or(1.6), *c.v2});
  if (c.v3) specs.emplace_back(tempering::SubGaussianV3{*c.v3});
  if (specs.size() != 1) {
    throw ValidationError("temper: give exactly one tempering flag (--tilt, --bound, --drift, "
                          "--walk-budget, --count-bound, --sibuya-bound, --sibuya-temper, "
                          "--subgaussian-v1, --subgaussian-v2, --subgaussian-v3)");
  }
  const auto tempered = tempering::temper(base, specs.front());
  json parameters{{"base", base.describe()}, {"tempering", tempering::describe(specs.front())}};
  if (!c.request.sample && c.request.kind.empty()) {
    return emit(ctx, c.common, tempered.describe() + "\n", std::move(parameters));
  }
  return emit_model(ctx, c.common, tempered, c.request, std::move(parameters));
}

int cmd_lepage(const Context& ctx, Commands& c) {
  lepage::LePageConfig cfg;
  cfg.scenario = lepage::parse_scenario(c.scenario);
  const auto forced = lepage::scenario_alpha(cfg.scenario);
  if (!c.alpha && !forced) throw ValidationError("lepage: --alpha is required for the generic scenario");
  cfg.alpha = c.alpha.value_or(forced.value_or(0.5));
  cfg.terms = c.terms.value_or(lepage::default_terms(cfg.scenario));
  cfg.multiplier = c.multiplier.empty() ? lepage::default_multiplier(cfg.scenario) : parse_multiplier(c.multiplier);
  const std::size_t n = count_or(c.common.n, 1000);
  const auto batch = lepage::simulate_batch(cfg, n, RngState{c.common.seed, 0});
  json parameters{{"scenario", std::string(lepage::to_string(cfg.scenario))},
                  {"alpha", cfg.alpha},
                  {"terms", cfg.terms},
                  {"multiplier", lepage::describe(cfg.multiplier)},
                  {"n", n}};
  return emit(ctx, c.common, want_json(c.common) ? values_json(batch.values) : values_csv(batch.values),
              std::move(parameters));
}

int cmd_pareto(const Context& ctx, Commands& c) {
  products::ProductConfig cfg;
  cfg.multiplier = parse_positive_law(c.multiplier.empty() ? "lognormal" : c.multiplier);
  cfg.p = c.p;
  if (c.count_trunc) cfg.count = products::TruncGeometricCount{*c.count_trunc};
  const RngState rng{c.common.seed, 0};
  json parameters{{"multiplier", products::describe(cfg.multiplier)}, {"p", cfg.p}};
  if (c.count_trunc) parameters["count_bound"] = *c.count_trunc;
  if (c.check) {
    const std::size_t n = count_or(c.common.n, 100'000);
    const auto report = products::check_pareto_limit(cfg, n, rng, c.threshold);
    parameters["n"] = n;
    parameters["threshold"] = c.threshold;
    return emit(ctx, c.common, estimation::to_json(report) + "\n", std::move(parameters),
                report.pass ? kExitOk : kExitFailed);
  }
  const std::size_t n = count_or(c.common.n, 1000);
  parameters["n"] = n;
  const auto batch = products::simulate_zp(cfg, n, rng);
  return emit(ctx, c.common, want_json(c.common) ? values_json(batch.values) : values_csv(batch.values),
              std::move(parameters));
}

int cmd_shortsell(const Context& ctx, Commands& c) {
  shortsell::ShortSellConfig cfg;
  cfg.p = c.ss_p;
  cfg.orders = c.orders.empty() ? models::ModelSpec(models::Sibuya{c.gamma}) : parse_model(c.orders);
  cfg.prices = c.prices.empty() ? models::ModelSpec(models::Exponential{c.a}) : parse_model(c.prices);
  cfg.threshold = c.price_threshold;
  shortsell::validate(cfg);
  json parameters{{"p", cfg.p},
                  {"orders", cfg.orders.describe()},
                  {"prices", cfg.prices.describe()},
                  {"threshold", cfg.threshold},
                  {"emit", c.request.kind}};
  const RngState rng{c.common.seed, 0};
  const auto& what = c.request.kind;
  if (what == "revenue" || what == "profit") {
    const std::size_t n = count_or(c.common.n, 1000);
    parameters["n"] = n;
    const auto batch = what == "revenue" ? shortsell::simulate_revenue(cfg, n, rng)
                                         : shortsell::simulate_profit_bound(cfg, n, rng);
    return emit(ctx, c.common, want_json(c.common) ? values_json(batch.values) : values_csv(batch.values),
                std::move(parameters));
  }
  if (what == "tail") {
    const std::size_t n = count_or(c.common.n, shortsell::kTailReportMinN);
    const auto r = shortsell::tail_report(cfg, n, rng, c.tolerance);
    json doc{{"hill", r.hill.index},
             {"hill_k", r.hill.k},
             {"hill_std_error", r.hill.std_error},
             {"classification", std::string(estimation::to_string(r.curvature.classification))},
             {"curvature_spread", r.curvature.spread},
             {"expected_order", r.expected_order ? json(*r.expected_order) : json()},
             {"tail_constant", r.analytic_tail_constant ? json(*r.analytic_tail_constant) : json()},
             {"tolerance", r.tolerance},
             {"pass", r.pass}};
    parameters["n"] = n;
    return emit(ctx, c.common, doc.dump(2) + "\n", std::move(parameters), r.pass ? kExitOk : kExitFailed);
  }
  if (c.request.points.empty()) throw ValidationError("shortsell: --points is required for --emit " + what);
  const auto points = parse_points(c.request.points);
  if (c.closed_form && !shortsell::has_closed_form(cfg)) {
    throw ValidationError("shortsell: --closed-form needs exponential prices and sibuya orders");
  }
  std::vector<std::complex<double>> values;
  for (double s : points) {
    double v = 0.0;
    if (what == "ls") {
      v = c.closed_form ? shortsell::closed_form_ls(s, cfg) : shortsell::analytic_ls(s, cfg);
    } else if (what == "ls-complement") {
      v = c.closed_form ? shortsell::closed_form_ls_complement(s, cfg) : shortsell::analytic_ls_complement(s, cfg);
    } else if (what == "lpx") {
      v = c.closed_form ? shortsell::lpx_closed_form(s, c.a, c.gamma)
                        : shortsell::analytic_lpx(s, cfg.prices, cfg.orders);
    } else {
      v = c.closed_form ? shortsell::lpx_closed_form_complement(s, c.a, c.gamma)
                        : shortsell::analytic_lpx_complement(s, cfg.prices, cfg.orders);
    }
    values.emplace_back(v, 0.0);
  }
  parameters["points"] = c.request.points;
  parameters["closed_form"] = c.closed_form;
  return emit(ctx, c.common, want_json(c.common) ? points_json(points, values) : points_csv(points, values),
              std::move(parameters));
}

int cmd_verify(const Context& ctx, Commands& c) {
  verification::SuiteOptions options;
  options.seed = c.common.seed;
  if (!c.common.n.empty()) options.n = parse_count(c.common.n);
  const auto reports = verification::run_suite(c.suite, options);
  std::size_t failed = 0;
  for (const auto& r : reports) {
    if (r.pass) continue;
    ++failed;
    ctx.err << "FAIL " << r.name << " statistic=" << format_double(r.statistic)
            << " tolerance=" << format_double(r.tolerance);
    if (const auto e = r.get("error"); !e.empty()) ctx.err << " error=" << e;
    if (r.get("underpowered") == "true") ctx.err << " (underpowered, needs n >= " << r.get("required_n") << ")";
    ctx.err << '\n';
  }
  ctx.err << reports.size() - failed << '/' << reports.size() << " reports passed\n";
  std::string body;
  if (want_json(c.common, true)) {
    body = estimation::to_json(reports) + "\n";
  } else {
    body = "name,statistic,tolerance,pass\n";
    for (const auto& r : reports) {
      body += r.name + ',' + format_double(r.statistic) + ',' + format_double(r.tolerance) + ',' +
              (r.pass ? "true" : "false") + '\n';
    }
  }
  json parameters{{"suite", c.suite}};
  if (options.n) parameters["n"] = *options.n;
  return emit(ctx, c.common, body, std::move(parameters), failed == 0 ? kExitOk : kExitFailed);
}

std::vector<double> read_values(const std::string& path) {
  std::istringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("estimate: '" + path + "' is empty");
  std::vector<std::string> header;
  {
    std::stringstream h(line);
    for (std::string cell; std::getline(h, cell, ',');) header.push_back(cell);
  }
  const auto col = std::find(header.begin(), header.end(), "value");
  if (col == header.end()) throw ValidationError("estimate: '" + path + "' has no 'value' column");
  const auto index = static_cast<std::size_t>(col - header.begin());
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    for (std::size_t i = 0; i <= index; ++i) {
      if (!std::getline(row, cell, ',')) throw ValidationError("estimate: short row '" + line + "'");
    }
    values.push_back(parse_number(cell));
  }
  if (values.empty()) throw ValidationError("estimate: '" + path + "' has no rows");
  return values;
}

int cmd_estimate(const Context& ctx, Commands& c) {
  const auto values = read_values(c.input);
  json doc{{"method", c.method}, {"n", values.size()}};
  json parameters{{"input", c.input}, {"input_sha256", sha256_hex(read_file(c.input))}, {"method", c.method}};
  if (c.method == "hill") {
    const auto est = c.k ? estimation::hill(values, *c.k) : estimation::hill(values);
    doc["index"] = est.index;
    doc["k"] = est.k;
    doc["std_error"] = est.std_error;
  } else if (c.method == "curvature") {
    const auto fit = estimation::survival_curvature(values);
    doc["classification"] = std::string(estimation::to_string(fit.classification));
    doc["slope"] = fit.slope;
    doc["spread"] = fit.spread;
    doc["slopes"] = fit.slopes;
    doc["tail_points"] = fit.tail_points;
  } else if (c.method == "transform") {
    const auto kind = models::parse_transform_kind(c.request.kind.empty() ? "cf" : c.request.kind);
    if (c.request.points.empty()) throw ValidationError("estimate: --points is required for transform");
    const auto t = estimation::empirical_transform(values, kind, parse_points(c.request.points));
    doc["kind"] = std::string(models::to_string(kind));
    doc["points"] = t.points;
    json re = json::array(), im = json::array();
    for (const auto& v : t.values) {
      re.push_back(v.real());
      im.push_back(v.imag());
    }
    doc["re"] = re;
    doc["im"] = im;
    doc["std_error"] = t.std_errors;
  } else if (c.method == "ks") {
    if (c.model.empty()) throw ValidationError("estimate: --model is required for ks");
    const auto model = parse_model(c.model, c.flags.given());
    const double d = estimation::ks_distance(values, [&](double x) { return models::cdf(model, x); });
    doc["model"] = model.describe();
    doc["distance"] = d;
    doc["critical_1e-3"] = estimation::ks_critical(1e-3, values.size());
    parameters["model"] = model.describe();
  } else {
    throw ValidationError("estimate: --method must be hill, curvature, transform or ks");
  }
  return emit(ctx, c.common, doc.dump(2) + "\n", std::move(parameters));
}

int cmd_replay(const Context& ctx, Commands& c) {
  const auto manifest = json::parse(read_file(c.manifest_in), nullptr, false);
  if (manifest.is_discarded() || !manifest.contains("args") || !manifest.contains("outputs")) {
    throw ValidationError("replay: '" + c.manifest_in + "' is not a tempertail manifest");
  }
  const auto& output = manifest["outputs"].at(0);
  const std::string target = c.replay_out.empty() ? output.at("path").get<std::string>() : c.replay_out;
  auto args = manifest["args"].get<std::vector<std::string>>();
  if (!args.empty() && args.front() == "replay") throw ValidationError("replay: refusing to replay a replay");
  args.insert(args.end(), {"--out", target, "--manifest", "none"});
  std::ostringstream sink;
  const int code = run(args, sink, ctx.err);
  if (code == kExitUsage) return code;
  const auto expected = output.at("sha256").get<std::string>();
  const auto actual = sha256_hex(read_file(target));
  if (actual != expected) {
    ctx.err << "replay: " << target << " differs (sha256 " << actual << ", manifest " << expected << ")\n";
    return kExitFailed;
  }
  ctx.out << "replay: " << target << " identical (sha256 " << actual << ")\n";
  return kExitOk;
}

void add_emit_options(CLI::App* app, EmitRequest& req) {
  app->add_option("--kind,--emit", req.kind, "Transform: cf, pgf, lt, pdf or pmf");
  app->add_option("--points", req.points, "Evaluation points: 0,0.5,1 or start:stop:count");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Heavy-tailed and tempered toy models: transforms, samplers and checks", "tempertail"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));
  Commands c;

  auto* sample = app.add_subcommand("sample", "Draw from a model; CSV index,value");
  sample->add_option("--model", c.model, "Model name or name(key=value, ...)")->required();
  c.flags.add(sample);
  add_common(sample, c.common);

  auto* transform = app.add_subcommand("transform", "Evaluate CF/PGF/LT/PDF/PMF; CSV point,re,im");
  transform->add_option("--model", c.model, "Model name or name(key=value, ...)")->required();
  c.flags.add(transform);
  add_emit_options(transform, c.request);
  transform->callback([&] {
    if (c.request.kind.empty()) c.request.kind = "cf";
  });
  add_common(transform, c.common, false);

  auto* temper = app.add_subcommand("temper", "Temper or truncate a model, then sample or evaluate it");
  temper->add_option("--base", c.model, "Base model name or name(key=value, ...)")->required();
  c.flags.add(temper, {"tilt", "bound"});
  temper->add_option("--tilt", c.tilt, "Exponential tilt a");
  temper->add_option("--bound,--truncate", c.truncate, "Hard truncation at M");
  temper->add_option("--drift", c.drift, "Right-step probability p of the walk");
  temper->add_option("--walk-budget", c.walk_budget, "Move budget M of the walk");
  temper->add_option("--count-bound", c.count_bound, "Geometric count truncated to {1..M}");
  temper->add_option("--sibuya-bound", c.sibuya_bound, "Sibuya truncated to {1..M}");
  temper->add_option("--sibuya-temper", c.sibuya_temper, "Analytic Sibuya tempering a in (0,1]");
  temper->add_option("--subgaussian-v1", c.v1, "Tilt the mixing variable by a");
  temper->add_option("--subgaussian-v2", c.v2, "Stable-mix tempering with tilt a");
  temper->add_option("--subgaussian-v2-beta", c.v2_beta, "Index beta of the stable-mix variant");
  temper->add_option("--subgaussian-v3", c.v3, "Truncate the mixing variable at M");
  add_emit_options(temper, c.request);
  temper->add_flag("--sample", c.request.sample, "Draw from the tempered model");
  add_common(temper, c.common);

  auto* lepage_cmd = app.add_subcommand("lepage", "LePage series draws; CSV index,value");
  lepage_cmd->add_option("--scenario", c.scenario, "generic, coulomb, newton or basestation")
      ->capture_default_str();
  lepage_cmd->add_option("--alpha", c.alpha, "Stable index (forced by named scenarios)");
  lepage_cmd->add_option("--terms", c.terms, "Series terms N");
  lepage_cmd->add_option("--multiplier", c.multiplier,
                         "constant(value=v), rademacher(magnitude=m) or a model");
  add_common(lepage_cmd, c.common);

  auto* pareto = app.add_subcommand("pareto", "Random products Z_p; CSV index,value or a limit check");
  pareto->add_option("--multiplier", c.multiplier,
                     "lognormal(mean=m, sd=s), degenerate(value=v) or a positive model")
      ->default_str("lognormal");
  pareto->add_option("--p", c.p, "Count parameter p")->capture_default_str();
  pareto->add_option("--count-bound", c.count_trunc, "Truncate the geometric count to {1..M}");
  pareto->add_flag("--check", c.check, "KS check against the Pareto limit; JSON report");
  pareto->add_option("--threshold", c.threshold, "KS threshold for --check")->capture_default_str();
  add_common(pareto, c.common);

  auto* ss = app.add_subcommand("shortsell", "Short-sell revenue: transforms, draws, tail report");
  ss->add_option("--p", c.ss_p, "Geometric count parameter p")->capture_default_str();
  ss->add_option("--gamma", c.gamma, "Sibuya order index gamma")->capture_default_str();
  ss->add_option("--a", c.a, "Exponential price scale a")->capture_default_str();
  ss->add_option("--orders", c.orders, "Order law, overrides --gamma");
  ss->add_option("--prices", c.prices, "Price law, overrides --a");
  ss->add_option("--threshold", c.price_threshold, "Resale price P* for --emit profit")->capture_default_str();
  ss->add_option("--emit", c.request.kind, "revenue, profit, tail, ls, ls-complement, lpx, lpx-complement")
      ->check(CLI::IsMember({"revenue", "profit", "tail", "ls", "ls-complement", "lpx", "lpx-complement"}));
  ss->add_option("--points", c.request.points, "Laplace arguments s");
  ss->add_flag("--closed-form", c.closed_form, "Use the exponential-price closed form");
  ss->add_option("--tolerance", c.tolerance, "Hill band for --emit tail")->capture_default_str();
  ss->callback([&] {
    if (c.request.kind.empty()) c.request.kind = "revenue";
  });
  add_common(ss, c.common);

  auto* verify = app.add_subcommand("verify", "Run a verification suite; JSON reports");
  std::vector<std::string> suites;
  for (auto s : verification::suite_names()) suites.emplace_back(s);
  verify->add_option("--suite", c.suite, "Suite name")->required()->check(CLI::IsMember(suites));
  add_common(verify, c.common);

  auto* estimate = app.add_subcommand("estimate", "Estimate from a CSV with a value column; JSON");
  estimate->add_option("--in", c.input, "Input CSV")->required();
  estimate->add_option("--method", c.method, "hill, curvature, transform or ks")->capture_default_str();
  estimate->add_option("--k", c.k, "Hill order statistics (default floor(sqrt(n)))");
  estimate->add_option("--model", c.model, "Reference model for ks");
  c.flags.add(estimate);
  add_emit_options(estimate, c.request);
  add_common(estimate, c.common, false);

  auto* replay = app.add_subcommand("replay", "Re-run a manifest and compare checksums");
  replay->add_option("manifest", c.manifest_in, "Manifest JSON")->required();
  replay->add_option("--out", c.replay_out, "Write here instead of the recorded path");

  const Context ctx{args, out, err};
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    if (*sample) return cmd_sample(ctx, c);
    if (*transform) return cmd_transform(ctx, c);
    if (*temper) return cmd_temper(ctx, c);
    if (*lepage_cmd) return cmd_lepage(ctx, c);
    if (*pareto) return cmd_pareto(ctx, c);
    if (*ss) return cmd_shortsell(ctx, c);
    if (*verify) return cmd_verify(ctx, c);
    if (*estimate) return cmd_estimate(ctx, c);
    return cmd_replay(ctx, c);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IncompatibleTempering& e) {
    err << "error: " << e.what();
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UnsupportedTransform& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const SamplingError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailed;
  }
}

}  // namespace tempertail::cli
