#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include <unistd.h>

#include "cli.hpp"
#include "tempertail/errors.hpp"
#include "tempertail/shortsell.hpp"

namespace {

namespace cli = tempertail::cli;
namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> rows(const std::string& csv) {
  std::vector<std::vector<std::string>> table;
  std::istringstream in(csv);
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::stringstream s(line);
    for (std::string cell; std::getline(s, cell, ',');) cells.push_back(cell);
    table.push_back(cells);
  }
  return table;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

class CliFiles : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("tempertail-cli-" + std::to_string(::getpid()) + "-" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

TEST(Parse, ModelStrings) {
  EXPECT_EQ(cli::parse_model("sibuya(gamma=0.25)").describe(), "sibuya(gamma=0.25)");
  EXPECT_EQ(cli::parse_model("sibuya", {{"gamma", "0.3"}}).describe(), "sibuya(gamma=0.3)");
  EXPECT_EQ(cli::parse_model("cts(lambda-plus=2)").as<tempertail::models::Cts>()->lambda_plus, 2.0);
  EXPECT_EQ(cli::parse_model("trunc-walk-fpt(budget=6)").as<tempertail::models::TruncWalkFpt>()->budget, 6);
  EXPECT_THROW(cli::parse_model("trunc-walk-fpt(budget=6.5)"), tempertail::ValidationError);
  EXPECT_THROW(cli::parse_model("levy(gamma=1)"), tempertail::ValidationError);
  EXPECT_THROW(cli::parse_model("cauchy"), tempertail::ValidationError);
  EXPECT_THROW(cli::parse_model("levy(sigma=abc)"), tempertail::ValidationError);
  // describe() output parses back to the same model.
  const auto spec = cli::parse_model("tempered-stable-mix(alpha=0.3, beta=1.2, tilt=0.7)");
  EXPECT_EQ(cli::parse_model(spec.describe()).describe(), spec.describe());
}

TEST(Parse, PointsAndCounts) {
  EXPECT_EQ(cli::parse_points("0,0.5,1"), (std::vector<double>{0, 0.5, 1}));
  EXPECT_EQ(cli::parse_points("0:1:5"), (std::vector<double>{0, 0.25, 0.5, 0.75, 1}));
  EXPECT_EQ(cli::parse_points("-1,1"), (std::vector<double>{-1, 1}));
  EXPECT_EQ(cli::parse_count("1e6"), 1'000'000u);
  EXPECT_THROW(cli::parse_count("0"), tempertail::ValidationError);
  EXPECT_THROW(cli::parse_count("2.5"), tempertail::ValidationError);
  EXPECT_EQ(cli::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Cli, SampleSibuya) {
  const auto r = run({"sample", "--model", "sibuya", "--gamma", "0.5", "--n", "1000", "--seed", "7"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto table = rows(r.out);
  ASSERT_EQ(table.size(), 1001u);
  EXPECT_EQ(table[0], (std::vector<std::string>{"index", "value"}));
  for (std::size_t i = 1; i < table.size(); ++i) {
    const double x = cli::parse_number(table[i][1]);
    ASSERT_GE(x, 1.0);
    ASSERT_EQ(x, std::floor(x));
  }
  EXPECT_EQ(run({"sample", "--model", "sibuya", "--gamma", "0.5", "--n", "1000", "--seed", "7"}).out, r.out);
}

TEST(Cli, ValidationExitsTwo) {
  const auto r = run({"sample", "--model", "sibuya", "--gamma", "1.5", "--n", "10"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("gamma must lie in (0,1]"), std::string::npos) << r.err;
  EXPECT_EQ(run({"sample", "--model", "levy", "--gamma", "0.3"}).code, 2);
  EXPECT_EQ(run({"sample"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"transform", "--model", "pareto", "--kind", "cf", "--points", "1"}).code, 2);
  EXPECT_EQ(run({"verify", "--suite", "bogus"}).code, 2);
  EXPECT_EQ(run({"verify", "--suite", "tails", "--n", "0"}).code, 2);
}

TEST(Cli, TransformRows) {
  const auto levy = run({"transform", "--model", "levy", "--kind", "cf", "--points", "0"});
  ASSERT_EQ(levy.code, 0) << levy.err;
  EXPECT_EQ(levy.out, "point,re,im\n0,1,0\n");
  const auto cts = run({"transform", "--model", "cts(c1=1, c2=1, lambda_plus=2, lambda_minus=2, alpha=0.5, mu=0.3)",
                        "--kind", "cf", "--points", "-1.5,1.5"});
  ASSERT_EQ(cts.code, 0) << cts.err;
  const auto t = rows(cts.out);
  EXPECT_EQ(t[1][1], t[2][1]);
  EXPECT_EQ(cli::parse_number(t[1][2]), -cli::parse_number(t[2][2]));
}

TEST(Cli, CsvRoundTripsLibraryValues) {
  const auto r = run({"transform", "--model", "inverse-gaussian(lambda=2, mu=0.7)", "--kind", "lt", "--points",
                      "0:3:31"});
  ASSERT_EQ(r.code, 0);
  const auto t = rows(r.out);
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double s = cli::parse_number(t[i][0]);
    EXPECT_EQ(cli::parse_number(t[i][1]), tempertail::models::ig_lt(s, 2.0, 0.7));
  }
}

TEST(Cli, ShortSellLaplaceTransform) {
  const auto r = run({"shortsell", "--emit", "ls", "--points", "1", "--a", "1", "--gamma", "0.5", "--p", "0.3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const tempertail::shortsell::ShortSellConfig cfg{0.3, tempertail::models::Sibuya{0.5},
                                                   tempertail::models::Exponential{1.0}, 0.0};
  EXPECT_EQ(cli::parse_number(rows(r.out)[1][1]), tempertail::shortsell::analytic_ls(1.0, cfg));
}

TEST(Cli, TemperExamples) {
  EXPECT_EQ(run({"temper", "--base", "levy", "--sigma", "1", "--tilt", "0.5", "--emit", "cf", "--points", "0"}).out,
            "point,re,im\n0,1,0\n");
  const auto walk = run({"temper", "--base", "walk-fpt", "--drift", "0.75", "--sample", "--n", "10"});
  ASSERT_EQ(walk.code, 0) << walk.err;
  const auto t = rows(walk.out);
  ASSERT_EQ(t.size(), 11u);
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double x = cli::parse_number(t[i][1]);
    EXPECT_GE(x, 1.0);
    EXPECT_EQ(std::fmod(x, 2.0), 1.0);
  }
  const auto refused = run({"temper", "--base", "sibuya", "--tilt", "0.5"});
  EXPECT_EQ(refused.code, 2);
  EXPECT_NE(refused.err.find("sibuya-temper"), std::string::npos);
  EXPECT_EQ(run({"temper", "--base", "sibuya", "--sibuya-temper", "0.5"}).out, "tempered-sibuya(gamma=0.5, tilt=0.5)\n");
}

TEST(Cli, VerifyExitCodes) {
  const auto ok = run({"verify", "--suite", "normalization"});
  EXPECT_EQ(ok.code, 0) << ok.err;
  const auto reports = nlohmann::json::parse(ok.out);
  EXPECT_GE(reports.size(), 12u);
  const auto weak = run({"verify", "--suite", "tails", "--n", "100"});
  EXPECT_EQ(weak.code, 1);
  EXPECT_NE(weak.err.find("underpowered"), std::string::npos);
}

TEST(Cli, LepageParetoEstimate) {
  const auto lp = run({"lepage", "--scenario", "newton", "--terms", "100", "--n", "50"});
  ASSERT_EQ(lp.code, 0) << lp.err;
  EXPECT_EQ(rows(lp.out).size(), 51u);
  EXPECT_EQ(run({"lepage", "--scenario", "bogus", "--n", "5"}).code, 2);
  const auto pareto = run({"pareto", "--multiplier", "pareto(shape=2)", "--p", "0.1", "--n", "20"});
  ASSERT_EQ(pareto.code, 0) << pareto.err;
  EXPECT_EQ(run({"pareto", "--multiplier", "lognormal(mean=1, sd=1, skew=2)"}).code, 2);
}

TEST_F(CliFiles, EstimateReadsSamples) {
  ASSERT_EQ(run({"sample", "--model", "pareto(shape=1.5)", "--n", "20000", "--out", path("p.csv")}).code, 0);
  const auto h = run({"estimate", "--in", path("p.csv"), "--method", "hill"});
  ASSERT_EQ(h.code, 0) << h.err;
  const auto hill = nlohmann::json::parse(h.out);
  EXPECT_NEAR(hill["index"].get<double>(), 1.5, 4.0 * 1.5 / std::sqrt(hill["k"].get<double>()));
  const auto ks = run({"estimate", "--in", path("p.csv"), "--method", "ks", "--model", "pareto", "--shape", "1.5"});
  ASSERT_EQ(ks.code, 0) << ks.err;
  const auto doc = nlohmann::json::parse(ks.out);
  EXPECT_LT(doc["distance"].get<double>(), doc["critical_1e-3"].get<double>());
  EXPECT_EQ(run({"estimate", "--in", path("missing.csv")}).code, 2);
}

TEST_F(CliFiles, ManifestReplayIsByteIdentical) {
  const auto out = path("draws.csv");
  ASSERT_EQ(run({"temper", "--base", "subgaussian(alpha=0.6)", "--subgaussian-v3", "2", "--sample", "--n", "3000",
                 "--seed", "5", "--out", out})
                .code,
            0);
  const auto manifest = nlohmann::json::parse(slurp(out + ".manifest.json"));
  EXPECT_EQ(manifest["outputs"][0]["sha256"], cli::sha256_hex(slurp(out)));
  EXPECT_EQ(manifest["seed"], 5);
  const auto replayed = path("again.csv");
  const auto r = run({"replay", out + ".manifest.json", "--out", replayed});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(replayed), slurp(out));
  // Without --out, replay regenerates the recorded path.
  std::ofstream(out, std::ios::app) << "0\n";
  EXPECT_EQ(run({"replay", out + ".manifest.json"}).code, 0);
  EXPECT_EQ(slurp(out), slurp(replayed));
  auto broken = manifest;
  broken["outputs"][0]["sha256"] = std::string(64, '0');
  std::ofstream(path("broken.json")) << broken.dump();
  EXPECT_EQ(run({"replay", path("broken.json"), "--out", path("x.csv")}).code, 1);
}

TEST_F(CliFiles, GoldenManifestsReplay) {
  for (const char* name : {"continuous", "discrete", "tempered"}) {
    const auto manifest = fs::path(TEMPERTAIL_GOLDEN_DIR) / (std::string(name) + ".manifest.json");
    const auto r = run({"replay", manifest.string(), "--out", path(std::string(name) + ".csv")});
    EXPECT_EQ(r.code, 0) << name << ": " << r.err;
    EXPECT_EQ(slurp(path(std::string(name) + ".csv")), slurp(fs::path(TEMPERTAIL_GOLDEN_DIR) / (std::string(name) + ".csv")))
        << name;
  }
}

}  // namespace
