// Runs the numbered acceptance checks and prints one PASS/FAIL line each.
// Exit status is 0 only if every check passes.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "cli.hpp"
#include "tempertail/verification.hpp"

namespace {

namespace fs = std::filesystem;
using tempertail::estimation::VerificationReport;

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;
  int reports = 0;
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

int run_cli(std::vector<std::string> args, std::string* err_text = nullptr) {
  std::ostringstream out, err;
  const int code = tempertail::cli::run(args, out, err);
  if (err_text != nullptr) *err_text = err.str();
  return code;
}

Outcome cli_contract() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  const fs::path dir = fs::temp_directory_path() / ("tempertail-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  auto fail = [&](std::string note) {
    o.pass = false;
    o.notes.push_back(std::move(note));
  };

  for (const char* name : {"continuous", "discrete", "tempered"}) {
    const fs::path golden = fs::path(TEMPERTAIL_GOLDEN_DIR) / name;
    const fs::path target = dir / (std::string(name) + ".csv");
    std::string err;
    const int code = run_cli({"replay", golden.string() + ".manifest.json", "--out", target.string()}, &err);
    ++o.reports;
    if (code != 0) fail(std::string(name) + " replay exit " + std::to_string(code) + ": " + err);
    else if (slurp(target) != slurp(golden.string() + ".csv")) fail(std::string(name) + " replay differs");
  }

  const fs::path fresh = dir / "fresh.csv";
  ++o.reports;
  if (run_cli({"sample", "--model", "cts(c1=1, c2=0.5, alpha=0.6)", "--n", "2000", "--seed", "9", "--out",
               fresh.string()}) != 0) {
    fail("fresh sample failed");
  } else if (run_cli({"replay", fresh.string() + ".manifest.json", "--out", (dir / "again.csv").string()}) != 0 ||
             slurp(fresh) != slurp(dir / "again.csv")) {
    fail("fresh replay differs");
  }

  struct Scenario {
    std::vector<std::string> args;
    int expected;
  };
  const std::vector<Scenario> scenarios = {
      {{"verify", "--suite", "normalization"}, 0},
      {{"verify", "--suite", "tails", "--n", "100"}, 1},
      {{"sample", "--model", "sibuya", "--gamma", "1.5", "--n", "10"}, 2},
  };
  for (const auto& s : scenarios) {
    ++o.reports;
    const int code = run_cli(s.args);
    if (code != s.expected) {
      fail(s.args[0] + " " + s.args[2] + ": exit " + std::to_string(code) + ", expected " +
           std::to_string(s.expected));
    }
  }
  fs::remove_all(dir);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.notes.push_back("elapsed " + std::to_string(seconds) + " s");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::string> suites = {"normalization", "limits", "mc-transforms", "tempering",
                                           "lepage",        "pareto", "shortsell"};
  std::map<int, Outcome> outcomes;
  for (int c = 1; c <= 10; ++c) outcomes[c];

  for (const auto& suite : suites) {
    const auto start = std::chrono::steady_clock::now();
    const auto reports = tempertail::verification::run_suite(suite);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cerr << "suite " << suite << ": " << reports.size() << " reports, " << seconds << " s\n";
    for (const VerificationReport& r : reports) {
      const std::string criterion = r.get("criterion");
      if (criterion.empty()) continue;
      auto& o = outcomes[std::stoi(criterion)];
      ++o.reports;
      if (!r.pass) {
        o.pass = false;
        std::string note = r.name + " statistic=" + tempertail::estimation::format_double(r.statistic) +
                           " tolerance=" + tempertail::estimation::format_double(r.tolerance);
        if (const auto e = r.get("error"); !e.empty()) note += " error=" + e;
        o.notes.push_back(note);
      }
    }
  }
  outcomes[11] = cli_contract();

  bool all = true;
  for (auto& [criterion, o] : outcomes) {
    if (o.reports == 0) {
      o.pass = false;
      o.notes.push_back("no checks ran");
    }
    all = all && o.pass;
    std::printf("criterion %2d: %s (%d checks)\n", criterion, o.pass ? "PASS" : "FAIL", o.reports);
    for (const auto& note : o.notes) std::printf("    %s\n", note.c_str());
  }
  return all ? 0 : 1;
}
