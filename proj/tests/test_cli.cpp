#include <gtest/gtest.h>

#include <sstream>

#include <json.hpp>

#include "rtor/cli.hpp"

using namespace rtor;

namespace {

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) { return ::testing::TempDir() + name; }

std::string write_model(const std::vector<std::string>& generate_args, const std::string& name) {
  const std::string path = temp_path(name);
  std::vector<std::string> args = generate_args;
  args.insert(args.end(), {"-o", path});
  EXPECT_EQ(run(args).code, 0);
  return path;
}

}  // namespace

TEST(Cli, NoArgumentsIsUsage) { EXPECT_EQ(run({}).code, 2); }

TEST(Cli, UnknownCommandIsUsage) { EXPECT_EQ(run({"frobnicate"}).code, 2); }

TEST(Cli, GenerateCircle) {
  const CliRun r = run({"generate", "circle", "--z", "0.5+0.5i"});
  EXPECT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["kind"], "circle");
}

TEST(Cli, GenerateLensBadParameters) { EXPECT_EQ(run({"generate", "lens", "--p", "4", "--q", "2"}).code, 2); }

TEST(Cli, GenerateIsDeterministic) {
  const std::vector<std::string> args{"generate", "random", "--n", "3", "--dims", "2,3,3,2", "--seed", "5"};
  EXPECT_EQ(run(args).out, run(args).out);
}

TEST(Cli, TorsionCircleWitness) {
  const std::string path = write_model({"generate", "circle", "--z", "2"}, "circle2.json");
  const CliRun r = run({"torsion", path, "--mode", "both"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  const auto& t = j["analytic"]["T"]["value"];
  EXPECT_NEAR(t[0].get<double>(), 0.0, 1e-15);
  EXPECT_NEAR(t[1].get<double>(), -1.0, 1e-15);
  EXPECT_EQ(j["analytic"]["T"]["ambiguity"], "exact");
  EXPECT_TRUE(j.contains("theta"));
}

TEST(Cli, TorsionTrivialCircleIsAssumptionFailure) {
  const std::string path = write_model({"generate", "circle", "--z", "1"}, "circle1.json");
  const CliRun r = run({"torsion", path});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("Assumption"), std::string::npos);
}

TEST(Cli, TorsionLensBothModes) {
  const std::string path = write_model({"generate", "lens", "--p", "5", "--q", "1", "--char", "1"}, "lens5.json");
  const CliRun r = run({"torsion", path, "--mode", "both"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j.contains("abs_ratio"));
  EXPECT_TRUE(j.contains("comb"));
  EXPECT_TRUE(j["analytic"]["T"].contains("abs"));
}

TEST(Cli, TorsionBadMode) {
  const std::string path = write_model({"generate", "circle", "--z", "2"}, "circle2b.json");
  EXPECT_EQ(run({"torsion", path, "--mode", "other"}).code, 2);
}

TEST(Cli, TorsionMissingFile) { EXPECT_EQ(run({"torsion", temp_path("does_not_exist.json")}).code, 2); }

TEST(Cli, CheckIdentity) {
  const CliRun r = run({"check", "identity", "--trials", "20", "--seed", "7"});
  EXPECT_EQ(r.code, 0) << r.out;
}

TEST(Cli, CheckUnknownSuite) { EXPECT_EQ(run({"check", "nosuchsuite"}).code, 2); }

TEST(Cli, SweepAnnulusCsv) {
  const CliRun r = run({"sweep", "--family", "circle", "--grid", "annulus", "--n-radii", "21", "--n-angles", "21"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream ss(r.out);
  std::string line;
  int rows = -1;
  while (std::getline(ss, line)) ++rows;
  EXPECT_EQ(rows, 441);
  EXPECT_NE(r.err.find("CR residual"), std::string::npos);
}

TEST(Cli, SweepEmptyGrid) { EXPECT_EQ(run({"sweep", "--n-radii", "0"}).code, 2); }

TEST(Cli, SweepIsByteIdentical) {
  const std::vector<std::string> args{"sweep", "--grid", "arc", "--out", "json"};
  const CliRun a = run(args);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, run(args).out);
}
