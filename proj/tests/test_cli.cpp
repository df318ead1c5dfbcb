#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "sl4/cli.hpp"

using namespace sl4;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(Cli, GroupSpec) {
  EXPECT_EQ(cli::parse_group_spec("SL3:2"), (std::pair<int, int>{3, 2}));
  EXPECT_EQ(cli::parse_group_spec("SL4:16"), (std::pair<int, int>{4, 16}));
  for (const char* bad : {"SL3", "GL3:2", "SL5:2", "SL3:x", "SL3:2x", "SL3:1"}) {
    EXPECT_THROW(cli::parse_group_spec(bad), std::invalid_argument) << bad;
  }
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"verify-all", "--cap", "1000"}).code, cli::kOperationalError);
  EXPECT_EQ(run({"pipeline", "--level", "4", "--rep", "not-a-rep"}).code, cli::kOperationalError);
  EXPECT_EQ(run({"no-such-command"}).code, cli::kOperationalError);
  EXPECT_EQ(run({"invariants", "--level", "2", "--cap", "1000"}).code, cli::kOperationalError);
  EXPECT_EQ(run({"pipeline", "--level", "6", "--rep", "trivial"}).code, cli::kOperationalError);
  EXPECT_EQ(run({"--version"}).code, cli::kVerified);
}

TEST(Cli, Chartab) {
  for (auto [spec, rows] : std::vector<std::pair<std::string, int>>{{"SL2:2", 3}, {"SL3:2", 6}, {"SL4:2", 14}}) {
    const Outcome o = run({"chartab", "--group", spec});
    EXPECT_EQ(o.code, 0) << o.err;
    EXPECT_EQ(std::count(o.out.begin(), o.out.end(), '\n'), rows + 1) << spec;
  }
}

TEST(Cli, CounterexampleAndInvariants) {
  const Outcome c = run({"counterexample", "--level", "2"});
  EXPECT_EQ(c.code, 0);
  EXPECT_NE(c.out.find("PASS"), std::string::npos);
  const Outcome i = run({"invariants", "--level", "2", "--json", "-"});
  EXPECT_EQ(i.code, 0);
  const auto pos = i.out.find('{');
  ASSERT_NE(pos, std::string::npos);
  const auto j = nlohmann::json::parse(i.out.substr(pos));
  EXPECT_EQ(j["report"]["class_count"], 14);
  EXPECT_EQ(j["seed"], kDefaultSeed);
  EXPECT_EQ(j["version"], cli::kToolVersion);
  EXPECT_EQ(j["report"]["prime"], 421);
}

TEST(Cli, PipelineFallbackStillVerifies) {
  const Outcome o = run({"pipeline", "--level", "4", "--rep", "Z2^4"});
  EXPECT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.out.find("fallback"), std::string::npos);
}

TEST(Cli, StrongconvDeterministic) {
  const auto dir = std::filesystem::temp_directory_path() / "sl4_cli_test";
  std::filesystem::create_directories(dir);
  const auto config = dir / "config.json";
  std::ofstream(config) << R"({"reps":[{"level":2,"rep":"nonzero:Z2^4"},{"level":4,"rep":{"type":"perm","space":"Z4^4"}}]})";
  const auto first = dir / "a.json";
  const auto second = dir / "b.json";
  ASSERT_EQ(run({"strongconv", "--nmax", "12", "--reps", config.string(), "--out", first.string()}).code, 0);
  ASSERT_EQ(run({"strongconv", "--nmax", "12", "--reps", config.string(), "--out", second.string()}).code, 0);
  std::ifstream a(first), b(second);
  const std::string sa((std::istreambuf_iterator<char>(a)), {});
  const std::string sb((std::istreambuf_iterator<char>(b)), {});
  EXPECT_EQ(sa, sb);
  const auto j = nlohmann::json::parse(sa);
  EXPECT_EQ(j["moments"].size(), 13u);
  EXPECT_EQ(j["bounds"].size(), 12u);
  EXPECT_EQ(j["rep_norms"].size(), 2u);
  std::ofstream(config) << "{broken";
  EXPECT_EQ(run({"strongconv", "--reps", config.string()}).code, cli::kOperationalError);
  std::filesystem::remove_all(dir);
}

TEST(Cli, Cache) {
  const auto dir = std::filesystem::temp_directory_path() / "sl4_cli_cache";
  std::filesystem::remove_all(dir);
  const Outcome first = run({"cache", "--group", "SL3:3", "--dir", dir.string()});
  EXPECT_EQ(first.code, 0) << first.err;
  EXPECT_NE(first.out.find("written"), std::string::npos);
  const Outcome second = run({"cache", "--group", "SL3:3", "--dir", dir.string()});
  EXPECT_EQ(second.code, 0);
  EXPECT_NE(second.out.find("loaded"), std::string::npos);
  EXPECT_NE(second.out.find("5616"), std::string::npos);
  std::filesystem::remove_all(dir);
}
