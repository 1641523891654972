#include <gtest/gtest.h>

#include <algorithm>

#include "tempertail/errors.hpp"
#include "tempertail/verification.hpp"

namespace {

namespace v = tempertail::verification;

TEST(Verification, SuiteNames) {
  const auto names = v::suite_names();
  for (auto expected : {"normalization", "limits", "mc-transforms", "lepage", "pareto", "shortsell", "tempering",
                        "tails", "all"}) {
    EXPECT_NE(std::find(names.begin(), names.end(), expected), names.end()) << expected;
  }
  EXPECT_THROW(v::run_suite("nope"), tempertail::ValidationError);
  EXPECT_THROW(v::run_suite("tails", {1, 0}), tempertail::ValidationError);
}

TEST(Verification, NormalizationPasses) {
  const auto reports = v::run_suite("normalization");
  EXPECT_GE(reports.size(), 12u);
  std::size_t tagged = 0;
  for (const auto& r : reports) {
    EXPECT_TRUE(r.pass) << r.name << " " << r.statistic;
    tagged += r.get("criterion") == "1" ? 1 : 0;
  }
  EXPECT_EQ(tagged, std::variant_size_v<tempertail::models::Params>);
}

TEST(Verification, UnderpoweredRunsFail) {
  const auto reports = v::run_suite("tails", {7, 100});
  ASSERT_FALSE(reports.empty());
  for (const auto& r : reports) {
    EXPECT_FALSE(r.pass) << r.name;
    EXPECT_EQ(r.get("underpowered"), "true") << r.name;
    EXPECT_FALSE(r.get("required_n").empty()) << r.name;
  }
}

TEST(Verification, SeedIsRecordedAndReproducible) {
  const auto a = v::run_suite("tails", {11, 1000});
  const auto b = v::run_suite("tails", {11, 1000});
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].name, b[i].name);
    EXPECT_EQ(a[i].statistic, b[i].statistic);
    EXPECT_EQ(a[i].get("seed"), "11");
  }
}

}  // namespace
