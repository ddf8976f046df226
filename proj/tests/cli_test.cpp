#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "sfmkit/cli.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
  sfmkit::Json json() const { return sfmkit::Json::parse(out); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = sfmkit::run_cli(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

std::string sample(const std::string& name) { return std::string(SFMKIT_SAMPLES_DIR) + "/" + name; }

TEST(Cli, CheckPathWithSingleEntryIsFeasible) {
  const auto r = run({"check", "--system", sample("e1.json"), "--pattern", sample("e1_k13.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = r.json();
  EXPECT_EQ(j["command"], "check");
  EXPECT_EQ(j["schema_version"], sfmkit::report_schema_version);
  EXPECT_TRUE(j["result"]["feasible"].get<bool>());
  EXPECT_TRUE(j["result"]["condition_b"]["holds"].get<bool>());
}

TEST(Cli, CheckInfeasibleStillExitsZero) {
  const auto path = (std::filesystem::temp_directory_path() / "sfmkit_cli_zero.json").string();
  sfmkit::save_pattern(path, sfmkit::StructuralPattern(3, 3));
  const auto r = run({"check", "--system", sample("e1.json"), "--pattern", path});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_FALSE(r.json()["result"]["feasible"].get<bool>());
  std::filesystem::remove(path);
}

TEST(Cli, PatternShapeMismatchIsPrecondition) {
  const auto r = run({"check", "--system", sample("split_example.json"), "--pattern", sample("e1_k13.json")});
  EXPECT_EQ(r.code, sfmkit::exit_code::precondition);
}

TEST(Cli, DesignBOnPath) {
  const auto r = run({"design-b", "--system", sample("e1.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.json()["result"]["pattern"]["nonzeros"], sfmkit::Json::parse("[[1, 3]]"));
}

TEST(Cli, DesignWritesPatternDocument) {
  const auto path = (std::filesystem::temp_directory_path() / "sfmkit_cli_design.json").string();
  const auto r = run({"design", "--system", sample("e1.json"), "--out", path});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(sfmkit::load_pattern(path), sfmkit::StructuralPattern(3, 3, {{0, 2}}));
  std::filesystem::remove(path);
}

TEST(Cli, EssentialReportsEvidence) {
  const auto r = run({"essential", "--system", sample("e1.json"), "--pattern", sample("e1_k13.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto res = r.json()["result"];
  EXPECT_TRUE(res["essential"].get<bool>());
  ASSERT_EQ(res["deletions"].size(), 1U);
  EXPECT_TRUE(res["deletions"][0]["breaks_condition_a"].get<bool>());
}

TEST(Cli, TransformBisectAndSplit) {
  const auto b = run({"transform", "--system", sample("bisect_example.json"), "--bisect", "1,4,3,2"});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(b.json()["result"]["pattern"]["nonzeros"], sfmkit::Json::parse("[[1, 2], [3, 4]]"));
  EXPECT_TRUE(b.json()["result"]["condition_a"].get<bool>());

  const auto s = run({"transform", "--system", sample("split_example.json"), "--cycle", "1,2,3,4", "--at", "2"});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_EQ(s.json()["result"]["pattern"]["nonzeros"], sfmkit::Json::parse("[[1, 2], [3, 4]]"));
  EXPECT_TRUE(s.json()["result"]["condition_b"].get<bool>());

  const auto bad = run({"transform", "--system", sample("bisect_example.json"), "--bisect", "1,4,1,2"});
  EXPECT_EQ(bad.code, sfmkit::exit_code::precondition);
  const auto both = run({"transform", "--system", sample("split_example.json")});
  EXPECT_EQ(both.code, sfmkit::exit_code::usage);
}

TEST(Cli, EnumerateAndOracle) {
  const auto e = run({"enumerate", "--system", sample("split_example.json"), "--depth", "2"});
  ASSERT_EQ(e.code, 0) << e.err;
  EXPECT_GE(e.json()["result"]["size"].get<int>(), 1);
  const auto o = run({"oracle", "--system", sample("e1.json")});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(o.json()["result"]["sparsest_feasible"]["count"], 1);
  const auto capped = run({"oracle", "--system", sample("e1.json"), "--max-enum", "4"});
  EXPECT_EQ(capped.code, sfmkit::exit_code::cap);
}

TEST(Cli, ValidateNeedsSeedAndIsReproducible) {
  const std::vector<std::string> base = {"validate", "--system", sample("e1.json"), "--pattern", sample("e1_k13.json")};
  EXPECT_EQ(run(base).code, sfmkit::exit_code::usage);
  auto with_seed = base;
  with_seed.insert(with_seed.end(), {"--seed", "42", "--trials", "8"});
  const auto a = run(with_seed), b = run(with_seed);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_TRUE(a.json()["result"]["agree"].get<bool>());
}

TEST(Cli, ExportPrintsDot) {
  const auto r = run({"export", "--system", sample("e1.json"), "--pattern", sample("e1_k13.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.json()["result"]["dot"].get<std::string>().rfind("digraph G {", 0), 0U);
}

TEST(Cli, ErrorsMapToDistinctCodes) {
  EXPECT_EQ(run({"frobnicate"}).code, sfmkit::exit_code::usage);
  EXPECT_EQ(run({}).code, sfmkit::exit_code::usage);
  EXPECT_EQ(run({"check"}).code, sfmkit::exit_code::usage);
  EXPECT_EQ(run({"check", "--system", "/nonexistent.json"}).code, sfmkit::exit_code::file);
  EXPECT_EQ(run({"check", "--system", sample("e1.json")}).code, sfmkit::exit_code::usage);
  EXPECT_EQ(run({"design-a", "--system", sample("two_inputs.json")}).code, sfmkit::exit_code::precondition);
  EXPECT_EQ(run({"--help"}).code, sfmkit::exit_code::ok);
}

}  // namespace
