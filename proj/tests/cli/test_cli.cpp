#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "padic_dbn");
  std::ostringstream out, err;
  const int code = padic_dbn::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("padic_dbn_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

}  // namespace

TEST_F(Cli, TreePrintsLeaves) {
  const Result r = run({"tree", "--p", "2", "--l", "2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("4 leaves"), std::string::npos);
  EXPECT_NE(r.out.find("2,0 1"), std::string::npos);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"tree", "--p", "2"}).code, 1);
  EXPECT_EQ(run({"tree", "--p", "4", "--l", "1"}).code, 2);
  EXPECT_EQ(run({"tree", "--p", "2", "--l", "40"}).code, 3);
  EXPECT_EQ(run({"model", "show", "--model", path("missing.json")}).code, 2);
  EXPECT_EQ(run({"oracle", "nope"}).code, 1);
}

TEST_F(Cli, ModelExactDeepenPipeline) {
  ASSERT_EQ(run({"model", "new", "--p", "2", "--l", "2", "--random-scale", "0.5", "--seed", "3", "--out", path("m.json")})
                .code,
            0);
  const Result show = run({"model", "show", "--model", path("m.json")});
  EXPECT_NE(show.out.find("parameters = 12"), std::string::npos);
  EXPECT_EQ(run({"model", "validate", "--model", path("m.json")}).code, 0);
  const Result exact = run({"exact", "--model", path("m.json"), "--out", path("d.csv"), "--check"});
  EXPECT_EQ(exact.code, 0);
  EXPECT_NE(exact.out.find("log_z = "), std::string::npos);
  EXPECT_EQ(run({"deepen", "--model", path("m.json"), "--out", path("m2.json"), "--w-eff", "1,-1,1,-1", "--b-eff",
                 "-inf"})
                .code,
            0);
  EXPECT_EQ(run({"exact", "--model", path("m2.json"), "--out", path("d2.csv")}).code, 0);
  EXPECT_EQ(slurp(path("d.csv")), slurp(path("d2.csv")));
  EXPECT_EQ(run({"deepen", "--model", path("m.json"), "--out", path("m3.json"), "--w-eff", "1,2", "--b-eff", "0"}).code,
            2);
}

TEST_F(Cli, CapOverrideFromEnvironment) {
  ASSERT_EQ(run({"model", "new", "--p", "2", "--l", "3", "--out", path("big.json")}).code, 0);
  ::setenv("PADIC_DBN_CAP", "4", 1);
  const Result r = run({"exact", "--model", path("big.json"), "--out", path("x.csv")});
  ::unsetenv("PADIC_DBN_CAP");
  EXPECT_EQ(r.code, 3);
}

TEST_F(Cli, GreedyAndApprox) {
  const Result a = run({"approx", "--random-support", "3", "--width", "4", "--seed", "5", "--lambda1", "14", "--out-model",
                        path("a.json"), "--trace", path("a.csv"), "--out-target", path("q.csv")});
  EXPECT_EQ(a.code, 0);
  EXPECT_NE(a.out.find("seed = 5"), std::string::npos);
  EXPECT_NE(a.out.find("reached = true"), std::string::npos);
  ASSERT_EQ(run({"model", "new", "--p", "2", "--l", "2", "--out", path("z.json")}).code, 0);
  const Result g = run({"greedy", "--target", path("q.csv"), "--model", path("z.json"), "--max-layers", "3", "--trace",
                        path("g.csv"), "--out-model", path("g.json")});
  EXPECT_EQ(g.code, 0);
  EXPECT_EQ(slurp(path("g.csv")).rfind("step,target_bitmask,alpha,lambda_or_beff,kl\n", 0), 0u);
}

TEST_F(Cli, Discretize) {
  std::ofstream(path("kernels.json")) << R"({"l": 1, "kind": "radial",
    "w": {"p": 3, "shells": [1], "tail": 2},
    "a": {"p": 3, "level": 0, "coeffs": [1]},
    "b": {"p": 3, "level": 1, "coeffs": [1, 2, 3]}})";
  EXPECT_EQ(run({"model", "discretize", "--input", path("kernels.json"), "--out", path("r.json")}).code, 0);
  EXPECT_EQ(run({"model", "validate", "--model", path("r.json")}).code, 0);
}

TEST_F(Cli, ZeroModelExactReport) {
  ASSERT_EQ(run({"model", "new", "--p", "2", "--l", "1", "--out", path("z.json")}).code, 0);
  const Result r = run({"exact", "--model", path("z.json"), "--out", path("z.csv")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("log_z = 2.77258872223978"), std::string::npos);
  EXPECT_EQ(slurp(path("z.csv")), "bitmask,probability\n0,0.25\n1,0.25\n2,0.25\n3,0.25\n");
}

TEST_F(Cli, ApproxWithExplicitLevel) {
  std::ofstream(path("q.csv")) << "bitmask,probability\n0,0.5\n1,0\n2,0\n3,0.5\n";
  const Result r = run({"approx", "--target", path("q.csv"), "--l0", "2", "--eps", "1e-3", "--trace", path("t.csv")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("visible units = 4"), std::string::npos);
  EXPECT_NE(r.out.find("reached = true"), std::string::npos);
  std::ofstream(path("bad.csv")) << "bitmask,probability\n0,0.5\n1,0.6\n";
  EXPECT_EQ(run({"approx", "--target", path("bad.csv")}).code, 2);
}
