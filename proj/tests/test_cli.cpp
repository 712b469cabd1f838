#include "multlab/cli/cache.hpp"
#include "multlab/cli/config.hpp"
#include "multlab/cli/explain.hpp"
#include "multlab/cli/runner.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace multlab;
using namespace multlab::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("multlab_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

const char* kMinimal = R"({
  "dimension": 2,
  "ideals": {"I": [[2, 0], [0, 3]]},
  "families": {"P": {"kind": "power", "ideal": "I"}},
  "tasks": [{"name": "p", "op": "mult", "family": "P", "horizon": 20}]
})";

const char* kFull = R"({
  "dimension": 2,
  "ideals": {"m": [[1, 0], [0, 1]], "I": [[2, 0], [1, 1]], "K": [[2, 0], [0, 2]]},
  "families": {
    "E": {"kind": "table", "length": 40,
          "generators": [{"base": [0, 0], "step": [2, 0]}, {"base": [1, 2], "step": [0, 0]}, {"base": [0, 0], "step": [0, 2]}]},
    "D": {"kind": "divisorial", "slabs": [{"weights": [1, 2], "threshold": "1"}, {"weights": [3, 1], "threshold": "4/3"}]},
    "P": {"kind": "power", "ideal": "I"},
    "C": {"kind": "closure-power", "ideal": "K"},
    "Q": {"kind": "colon", "family": "D", "ideal": "m"},
    "R": {"kind": "rescale", "family": "C", "factor": "3/2"},
    "X": {"kind": "product", "left": "C", "right": "D"},
    "T": {"kind": "table", "values": [[[1, 0], [0, 1]], [[2, 0], [1, 1], [0, 2]]]},
    "W": {"kind": "colon-power", "family": "C", "ideal": "m"}
  },
  "tasks": [
    {"name": "e2", "op": "mult", "family": "E", "horizon": 40, "expect": 0, "abs_tolerance": 1e-6},
    {"name": "q", "op": "colon-limit", "family": "D", "ideal": "m", "horizon": 30, "tolerance": 0.05},
    {"name": "w", "op": "weakep", "family": "P", "ideal": "K", "r": 2, "horizon": 20},
    {"name": "g", "op": "weakly-graded", "family": "Q", "witness": [0, 2], "horizon": 8},
    {"name": "b", "op": "bounded-below", "family": "D", "s": 2, "horizon": 8}
  ],
  "cache": "lengths.cache",
  "threads": 2
})";

}  // namespace

TEST(ParseConfig, MinimalConfigIsValid) {
  auto job = parse_config(kMinimal);
  EXPECT_EQ(job.dimension, 2u);
  ASSERT_EQ(job.tasks.size(), 1u);
  EXPECT_EQ(job.tasks[0].op, "mult");
  EXPECT_EQ(job.families.at("P").kind, "power");
}

TEST(ParseConfig, UnresolvedReferenceNamesIt) {
  std::string e = error_of(R"({"dimension": 2, "ideals": {}, "families": {"P": {"kind": "power", "ideal": "K1"}}, "tasks": []})");
  EXPECT_NE(e.find("\"K1\""), std::string::npos) << e;
  e = error_of(R"({"dimension": 2, "tasks": [{"name": "t", "op": "mult", "family": "F9"}]})");
  EXPECT_NE(e.find("\"F9\""), std::string::npos) << e;
}

TEST(ParseConfig, DimensionMismatch) {
  std::string e = error_of(R"({"dimension": 2, "ideals": {"I": [[1, 0, 0]]}})");
  EXPECT_NE(e.find("dimension"), std::string::npos) << e;
}

TEST(ParseConfig, SyntaxErrorReportsLineAndColumn) {
  std::string e = error_of("{\n  \"dimension\": 2,\n  \"ideals\": {,}\n}");
  EXPECT_NE(e.find("line 3"), std::string::npos) << e;
  EXPECT_NE(e.find("column"), std::string::npos) << e;
}

TEST(ParseConfig, RejectsUnknownKeysAndBadTasks) {
  EXPECT_NE(error_of(R"({"dimension": 2, "extra": 1})").find("\"extra\""), std::string::npos);
  EXPECT_NE(error_of(R"({"dimension": 2, "ideals": {"I": [[1, 0]]}, "families": {"P": {"kind": "power", "ideal": "I", "factor": 2}}})")
                .find("\"factor\""),
            std::string::npos);
  EXPECT_NE(error_of(R"({"dimension": 2, "ideals": {"I": [[1, 0], [0, 1]]}, "families": {"P": {"kind": "power", "ideal": "I"}},
                         "tasks": [{"name": "t", "op": "mult", "family": "P", "horizon": 3}]})")
                .find("horizon"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"dimension": 2, "tasks": [{"name": "t", "op": "integrate"}]})").find("integrate"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"dimension": 2, "families": {"A": {"kind": "rescale", "family": "B", "factor": 2},
                                                       "B": {"kind": "rescale", "family": "A", "factor": 2}}})")
                .find("cyclic"),
            std::string::npos);
  EXPECT_FALSE(error_of(R"({"dimension": 0})").empty());
}

TEST(ParseConfig, RenderRoundTrips) {
  for (const char* text : {kMinimal, kFull}) {
    auto job = parse_config(text);
    auto again = parse_config(render(job));
    EXPECT_EQ(job, again);
    EXPECT_EQ(render(job), render(again));
  }
}

TEST(ParseConfig, BuildsEveryFamilyKind) {
  auto job = parse_config(kFull);
  auto fams = build_families(job);
  EXPECT_EQ(fams.size(), 9u);
  EXPECT_EQ(fams.at("R").kind(), FamilyKind::rescale);
  EXPECT_EQ(fams.at("T").eval(2), MonomialIdeal(2, {Exponent{2, 0}, Exponent{1, 1}, Exponent{0, 2}}));
  EXPECT_EQ(fams.at("E").eval(1), MonomialIdeal(2, {Exponent{2, 0}, Exponent{0, 2}}));
}

TEST(LengthCacheTest, PutGetAndCold) {
  auto dir = scratch("cache");
  LengthCache cache((dir / "c.txt").string());
  EXPECT_FALSE(cache.get("abc", 7).has_value());
  cache.put("abc", 7, 46);
  EXPECT_EQ(cache.get("abc", 7), std::optional<std::int64_t>(46));
  cache.put("abc", 7, 46);
  EXPECT_THROW(cache.put("abc", 7, 47), CacheError);
  LengthCache reloaded((dir / "c.txt").string());
  EXPECT_EQ(reloaded.get("abc", 7), std::optional<std::int64_t>(46));
  EXPECT_EQ(reloaded.size(), 1u);
}

TEST(LengthCacheTest, CorruptLinesAreSkippedConflictsAreFatal) {
  auto dir = scratch("cache_corrupt");
  {
    std::ofstream out(dir / "c.txt");
    out << "abc,1,3\nnot a line\nabc,x,4\nabc,2,9\n";
  }
  LengthCache cache((dir / "c.txt").string());
  EXPECT_EQ(cache.warnings().size(), 2u);
  EXPECT_EQ(cache.get("abc", 2), std::optional<std::int64_t>(9));
  {
    std::ofstream out(dir / "c.txt", std::ios::app);
    out << "abc,2,10\n";
  }
  EXPECT_THROW(LengthCache((dir / "c.txt").string()), CacheError);
}

TEST(Run, WritesArtifactsAndExitCodes) {
  auto dir = scratch("run");
  auto job = parse_config(kFull);
  job.cache = (dir / "lengths.cache").string();
  RunOptions opts;
  opts.out_dir = dir / "out";
  auto result = run(job, opts);
  EXPECT_EQ(result.exit_code, 0);
  for (const auto& t : result.tasks) EXPECT_EQ(t.report.status, Status::pass) << t.name << " " << t.error.value_or("");
  EXPECT_TRUE(fs::exists(dir / "out" / "e2.csv"));
  EXPECT_TRUE(fs::exists(dir / "out" / "w-weakep.csv"));
  EXPECT_TRUE(fs::exists(dir / "out" / "report.txt"));
  auto report = nlohmann::json::parse(slurp(dir / "out" / "report.json"));
  EXPECT_EQ(report["exit_code"], 0);
  EXPECT_EQ(report["tasks"].size(), 5u);
  EXPECT_EQ(slurp(dir / "out" / "e2.csv").substr(0, 26), "n,length,normalized,exact\n");
}

TEST(Run, FailuresAreRecordedWithoutAborting) {
  auto dir = scratch("run_fail");
  auto job = parse_config(R"({
    "dimension": 2,
    "ideals": {"m": [[1, 0], [0, 1]]},
    "families": {"T": {"kind": "table", "values": [[[1, 0], [0, 1]], [[3, 0], [0, 3]], [[3, 0], [0, 3]]]},
                 "P": {"kind": "power", "ideal": "m"}},
    "tasks": [{"name": "short", "op": "mult", "family": "T", "horizon": 10},
              {"name": "graded", "op": "weakly-graded", "family": "T", "witness": [0, 0], "horizon": 3},
              {"name": "ok", "op": "mult", "family": "P", "horizon": 10, "expect": 1}]
  })");
  RunOptions opts;
  opts.out_dir = dir;
  auto result = run(job, opts);
  EXPECT_EQ(result.exit_code, 2);
  ASSERT_EQ(result.tasks.size(), 3u);
  EXPECT_EQ(result.tasks[0].report.status, Status::fail);
  EXPECT_TRUE(result.tasks[0].error.has_value());
  EXPECT_EQ(result.tasks[1].report.status, Status::fail);
  EXPECT_EQ(result.tasks[2].report.status, Status::pass);
}

TEST(Run, ExitCodePrecedence) {
  std::vector<TaskResult> t(2);
  t[0].report.status = Status::inconclusive;
  t[1].report.status = Status::not_applicable;
  EXPECT_EQ(exit_code_for(t), 3);
  t[1].report.status = Status::fail;
  EXPECT_EQ(exit_code_for(t), 2);
  t[0].report.status = Status::pass;
  t[1].report.status = Status::not_applicable;
  EXPECT_EQ(exit_code_for(t), 0);
}

TEST(Run, FlagsOverrideConfig) {
  auto dir = scratch("run_flags");
  auto job = parse_config(kMinimal);
  RunOptions opts;
  opts.out_dir = dir;
  opts.horizon = 12;
  auto result = run(job, opts);
  auto csv = slurp(dir / "p.csv");
  EXPECT_NE(csv.find("\n12,"), std::string::npos);
  EXPECT_EQ(csv.find("\n20,"), std::string::npos);
}

TEST(Explain, KnowsEveryOp) {
  for (const auto& [op, _] : op_signatures()) EXPECT_TRUE(explain(op).has_value()) << op;
  EXPECT_FALSE(explain("nonsense").has_value());
}
