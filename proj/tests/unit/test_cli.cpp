#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "onpack/cli.hpp"
#include "onpack/errors.hpp"
#include "onpack/io.hpp"

using namespace onpack;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result run_cli(const std::string& args) {
  const std::string cmd = std::string(ONPACK_CLI_PATH) + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("onpack_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const json& j) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << j.dump(1);
    return p.string();
  }
  std::string read(const std::string& name) {
    std::ifstream in(dir_ / name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  fs::path dir_;
};

json two_period_config() {
  return {{"schema_version", 1},
          {"generator", {{"name", "two-period"}}},
          {"policy", "lp"},
          {"episodes", 2000},
          {"seed", 3},
          {"memo_groups", 8},
          {"solver", {{"epsilon", 0.1}, {"K", 200}, {"eta1", 64}, {"eta2", 2}, {"alpha", 0.05}}}};
}

}  // namespace

TEST_F(CliTest, ParamsRow) {
  const Result r = run_cli("params --mode unaccelerated --epsilon 1 --L 1 --iota 1 --T 5");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("unaccelerated,1,1,1,5,5,2,1,0.041666666666666664,288,2304,5"), std::string::npos) << r.out;
}

TEST_F(CliTest, RunIsByteIdentical) {
  json cfg = two_period_config();
  cfg["episodes"] = 300;
  const std::string path = write("run.json", cfg);
  const std::string a = (dir_ / "a.csv").string(), b = (dir_ / "b.csv").string();
  ASSERT_EQ(run_cli("run --config " + path + " --out " + a).code, 0);
  ASSERT_EQ(run_cli("run --config " + path + " --out " + b + " --trace " + (dir_ / "t.jsonl").string()).code, 0);
  EXPECT_EQ(read("a.csv"), read("b.csv"));
  EXPECT_EQ(read("a.csv").rfind(cli::csv_header(), 0), 0u);
  EXPECT_NE(read("t.jsonl").find("\"remaining\""), std::string::npos);
  const std::string c = (dir_ / "c.csv").string();
  ASSERT_EQ(run_cli("run --config " + path + " --seed 4 --out " + c).code, 0);
  EXPECT_NE(read("a.csv"), read("c.csv"));
}

TEST_F(CliTest, VerifyTwoPeriodPasses) {
  const std::string path = write("verify.json", two_period_config());
  const Result r = run_cli("verify --config " + path);
  ASSERT_EQ(r.code, 0) << r.out;
  const json out = json::parse(r.out);
  EXPECT_NEAR(out.at("OPT_lp").get<double>(), 0.6, 1e-9);
  EXPECT_NEAR(out.at("OPT_pack").get<double>(), 0.6, 1e-9);
  EXPECT_LE(out.at("gap").get<double>(), 0.2);
  EXPECT_EQ(out.at("audit"), "pass");
}

TEST_F(CliTest, ConfigErrorsExitTwo) {
  EXPECT_EQ(run_cli("run --config " + (dir_ / "missing.json").string()).code, 2);
  json bad = two_period_config();
  bad["policy"] = "nonsense";
  EXPECT_EQ(run_cli("run --config " + write("bad.json", bad)).code, 2);
  json eta = two_period_config();
  eta["solver"]["eta2"] = 9;
  EXPECT_EQ(run_cli("run --config " + write("eta.json", eta)).code, 2);
  EXPECT_EQ(run_cli("params --epsilon 2").code, 2);
  EXPECT_EQ(run_cli("frobnicate").code, 2);
}

TEST_F(CliTest, GenWritesLoadableInstances) {
  for (const char* name : {"two-period", "random-tree", "nrm", "is", "mwm", "mmo"}) {
    const std::string spec = write(std::string(name) + "_spec.json", {{"generator", {{"name", name}, {"T", 3}}}});
    const std::string out = (dir_ / (std::string(name) + ".json")).string();
    ASSERT_EQ(run_cli("gen --config " + spec + " --seed 5 --out " + out).code, 0) << name;
    const LoadedInstance inst = load_instance_file(out);
    EXPECT_GE(inst.spec.T, 1u) << name;
  }
}

TEST(CliInProcess, IncompatiblePolicyRejected) {
  const json cfg = {{"generator", {{"name", "two-period"}}}, {"policy", "is"}};
  EXPECT_THROW(cli::experiment_from_json(cfg, ".", {}), ConfigError);
}

TEST(CliInProcess, TheoryConfigFillsParameters) {
  const json cfg = {{"generator", {{"name", "two-period"}}}, {"solver", {{"theory", "unaccelerated"}, {"epsilon", 1.0}}}};
  const cli::Experiment e = cli::experiment_from_json(cfg, ".", {});
  EXPECT_EQ(e.solver.K, 288u);
  EXPECT_EQ(e.solver.eta1, 2304u);
  EXPECT_FALSE(e.solver.practical_override);
}

TEST(CliInProcess, DefaultThetaFromSmoothingRule) {
  const json cfg = {{"generator", {{"name", "two-period"}}}, {"solver", {{"epsilon", 0.1}}}};
  const cli::Experiment e = cli::experiment_from_json(cfg, ".", {});
  EXPECT_DOUBLE_EQ(e.solver.theta, 0.1 * 2 / 4.0);
}

TEST(Io, TreeRoundTrip) {
  const ScenarioTree tree = cli::two_period_tree();
  const LoadedInstance back = instance_from_json(tree_to_json(tree));
  ASSERT_TRUE(back.explicit_tree());
  ASSERT_EQ(back.tree->size(), tree.size());
  for (std::size_t id = 0; id < tree.size(); ++id) {
    EXPECT_EQ(back.tree->node(id).item, tree.node(id).item);
    EXPECT_EQ(back.tree->node(id).mu, tree.node(id).mu);
  }
  SolverConfig s;
  s.K = 7;
  s.momentum = Momentum::Accelerated;
  const SolverConfig t = solver_from_json(solver_to_json(s));
  EXPECT_EQ(t.K, 7u);
  EXPECT_EQ(t.momentum, Momentum::Accelerated);
}

TEST(Io, MalformedInstanceRejected) {
  EXPECT_THROW(instance_from_json(json{{"T", 2}}), InstanceError);
  json j = tree_to_json(cli::two_period_tree());
  j["kind"] = "mystery";
  EXPECT_THROW(instance_from_json(j), ConfigError);
}
