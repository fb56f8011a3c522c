#include "ulab/cli.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = ulab::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json json_of(const Result& r) { return nlohmann::json::parse(r.out); }

}  // namespace

TEST(Cli, NormExamples) {
  auto r = run({"norm", "--group", "2", "--values", "1,-1", "--k", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json_of(r)["value"], 1.0);
  EXPECT_EQ(r.out.back(), '\n');
  r = run({"norm", "--group", "4", "--values", "1,1,1,1", "--k", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json_of(r)["value"], 1.0);
  r = run({"norm", "--group", "2", "--values", "1,-1", "--k", "1", "--engine", "naive"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json_of(r)["value"], 0.0);
}

TEST(Cli, ConfigErrorsExitTwo) {
  EXPECT_EQ(run({"norm", "--group", "6", "--values", "1,2", "--k", "2"}).code, 2);
  EXPECT_EQ(run({"norm", "--group", "6", "--values", "wrong-length", "--k", "2"}).code, 2);
  EXPECT_EQ(run({"norm", "--group", "0", "--values", "1", "--k", "2"}).code, 2);
  EXPECT_EQ(run({"eval", "--expr", "(c +", "--group", "2", "--values", "1,1"}).code, 2);
  EXPECT_EQ(run({"trace", "--gen", "nope", "--k", "2"}).code, 2);
  EXPECT_EQ(run({"bogus"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  const auto r = run({"norm", "--group", "2", "--values", "1,-1", "--k", "9"});
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, BudgetRefusalExitsThree) {
  EXPECT_EQ(run({"--budget", "100", "norm", "--group", "64", "--gen", "random_sign", "--k", "3"}).code, 3);
  EXPECT_EQ(run({"norm", "--budget", "100", "--group", "64", "--gen", "random_sign", "--k", "3"}).code, 3);
}

TEST(Cli, EvalTable) {
  auto r = run({"eval", "--expr", "(c * T[1] c)", "--group", "4", "--values", "1,0,-1,0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json_of(r);
  EXPECT_EQ(j["function"]["values"], nlohmann::json::array({0.0, 0.0, 0.0, 0.0}));
  r = run({"eval", "--expr", "(c * T[1] c)", "--group", "4", "--values", "1,0,-1,0", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "x0,value\n0,0\n1,0\n2,0\n3,0\n");
}

TEST(Cli, TraceCsvAndJson) {
  auto r = run({"trace", "--gen", "random_sign:seed=7", "--k", "2", "--schedule", "16..256", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "N,group,k,expr,value,engine,seconds");
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  EXPECT_EQ(rows, 5);
  r = run({"trace", "--gen", "interval:alpha=0.5", "--k", "1,2", "--schedule", "16..64", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json_of(r);
  EXPECT_EQ(j["records"].size(), 6u);
  EXPECT_EQ(j["summary"].size(), 2u);
}

TEST(Cli, RefineAndAp) {
  auto r = run({"refine", "--group", "8", "--values", "1,1,1,1,-1,-1,-1,-1", "--k1", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = json_of(r);
  EXPECT_EQ(j["initial_gap"], 0.625);
  EXPECT_EQ(j["steps"][0]["g"], nlohmann::json::array({1}));
  r = run({"ap", "--group", "5", "--values", "1,1,1,0,0", "--k", "3", "--delta", "0.1"});
  ASSERT_EQ(r.code, 0) << r.err;
  j = json_of(r);
  EXPECT_EQ(j.dump().find("0.2") != std::string::npos, true);
}

TEST(Cli, SelftestPasses) {
  const auto r = run({"selftest"});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_EQ(json_of(r)["failed"], 0);
}

TEST(Cli, OutputIsByteIdenticalAcrossRunsAndThreads) {
  const std::vector<std::vector<std::string>> commands = {
      {"norm", "--group", "4,4", "--gen", "random_uniform:seed=3", "--k", "1,2,3"},
      {"trace", "--gen", "random_sign:seed=7", "--k", "1,2", "--schedule", "16..128"},
      {"refine", "--group", "2,2,2,2", "--gen", "random_sign:seed=4", "--k1", "2"},
      {"selftest"},
  };
  for (const auto& c : commands) {
    auto one = c;
    one.insert(one.begin(), {"--threads", "1"});
    auto four = c;
    four.insert(four.begin(), {"--threads", "4"});
    const auto a = run(one), b = run(four), again = run(one);
    EXPECT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out) << c[0];
    EXPECT_EQ(a.out, again.out) << c[0];
  }
}

TEST(Cli, ConfigFileMergeFlagsWin) {
  const auto dumped = run({"norm", "--group", "2", "--values", "1,-1", "--k", "2", "--dump-config"});
  ASSERT_EQ(dumped.code, 0) << dumped.err;
  const auto path = std::filesystem::temp_directory_path() / "ulab_test_config.toml";
  {
    std::ofstream f(path);
    f << dumped.out;
  }
  const auto direct = run({"norm", "--group", "2", "--values", "1,-1", "--k", "2"});
  const auto via_file = run({"--config", path.string(), "norm"});
  EXPECT_EQ(via_file.code, 0) << via_file.err;
  EXPECT_EQ(via_file.out, direct.out);
  const auto overridden = run({"--config", path.string(), "norm", "--k", "1"});
  EXPECT_EQ(overridden.code, 0) << overridden.err;
  EXPECT_EQ(json_of(overridden)["value"], 0.0);
  std::filesystem::remove(path);
}

TEST(Cli, OutputFlagWritesFile) {
  const auto path = std::filesystem::temp_directory_path() / "ulab_test_out.json";
  const auto r = run({"--output", path.string(), "norm", "--group", "2", "--values", "1,-1", "--k", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  EXPECT_EQ(nlohmann::json::parse(ss.str())["value"], 1.0);
  std::filesystem::remove(path);
}
