#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "lsts/io.hpp"

namespace fs = std::filesystem;
using namespace lsts;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("lsts_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  // Runs the CLI with stdout and stderr captured; returns the exit status.
  int run(const std::string& args) {
    const std::string cmd = std::string(LSTS_CLI_PATH) + " " + args + " > " + path("stdout.txt") +
                            " 2> " + path("stderr.txt");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string slurp(const std::string& file) const {
    std::ifstream in(file, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  std::string model(const std::string& name) const {
    return std::string(LSTS_MODELS_DIR) + "/" + name;
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, SimulateIsReproducible) {
  ASSERT_EQ(run("simulate --model " + model("sweeping_peak_tvar2.json") + " --T 300 --seed 7 --out " +
                path("a")),
            0)
      << slurp(path("stderr.txt"));
  ASSERT_EQ(run("simulate --model " + model("sweeping_peak_tvar2.json") + " --T 300 --seed 7 --out " +
                path("b")),
            0);
  const std::string a = slurp(path("a/realization.csv"));
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, slurp(path("b/realization.csv")));
  EXPECT_EQ(read_realization_csv(path("a/realization.csv")).T(), 300);
  const Json spec = read_json_file(path("a/spec.json"));
  EXPECT_EQ(spec["seed"], 7);
  EXPECT_EQ(spec["T"], 300);
  EXPECT_TRUE(fs::exists(path("a/run.json")));

  ASSERT_EQ(run("simulate --model " + model("sweeping_peak_tvar2.json") + " --T 300 --seed 8 --out " +
                path("c")),
            0);
  EXPECT_NE(a, slurp(path("c/realization.csv")));
}

TEST_F(CliTest, SimulateUsesFileDefaults) {
  ASSERT_EQ(run("simulate --model " + model("ar1.json") + " --out " + path("a")), 0);
  EXPECT_EQ(read_realization_csv(path("a/realization.csv")).T(), 512);
}

TEST_F(CliTest, UsageAndSchemaErrorsExitTwo) {
  EXPECT_EQ(run("no-such-command"), 2);
  EXPECT_EQ(run("simulate"), 2);
  std::ofstream(path("bad.json")) << R"({"schema": 1, "family": "tvXY", "alpha": [{"kind": "?"}]})";
  EXPECT_EQ(run("simulate --model " + path("bad.json") + " --T 10 --out " + path("o")), 2);
  const std::string err = slurp(path("stderr.txt"));
  EXPECT_NE(err.find("family"), std::string::npos) << err;
  EXPECT_NE(err.find("alpha[0].kind"), std::string::npos) << err;
  std::ofstream(path("unstable.json")) << R"({"schema": 1, "family": "tvAR", "alpha": [1.5]})";
  EXPECT_EQ(run("simulate --model " + path("unstable.json") + " --T 10 --out " + path("o")), 2);
}

TEST_F(CliTest, DataAndSegmentationErrorsExitFour) {
  EXPECT_EQ(run("fit --input " + path("missing.csv") + " --method local-yw --N 32 --out " + path("o")),
            4);
  std::ofstream(path("bad.csv")) << "1\n2\nthree\n";
  EXPECT_EQ(run("fit --input " + path("bad.csv") + " --method local-yw --N 2 --out " + path("o")), 4);
  ASSERT_EQ(run("simulate --model " + model("ar1.json") + " --T 64 --out " + path("sim")), 0);
  EXPECT_EQ(run("fit --input " + path("sim/realization.csv") +
                " --method block-whittle --p 1 --N 128 --S 16 --out " + path("o")),
            4)
      << slurp(path("stderr.txt"));
}

TEST_F(CliTest, FitMethodsProduceOutputs) {
  ASSERT_EQ(run("simulate --model " + model("tvar1_linear.json") + " --out " + path("sim")), 0);
  const std::string input = " --input " + path("sim/realization.csv");

  ASSERT_EQ(run("fit" + input + " --method local-yw --p 1 --N 128 --grid-u 5 --out " + path("yw")), 0)
      << slurp(path("stderr.txt"));
  const Json yw = read_json_file(path("yw/fit.json"));
  EXPECT_EQ(yw["estimates"].size(), 5u);
  EXPECT_TRUE(fs::exists(path("yw/curves.csv")));

  ASSERT_EQ(run("fit" + input + " --method block-whittle --p 1 --orders 1 --N 64 --S 32 --out " +
                path("bw")),
            0)
      << slurp(path("stderr.txt"));
  const Json bw = read_json_file(path("bw/fit.json"));
  ASSERT_EQ(bw["fit"]["eta"].size(), 3u);
  // alpha_1(u) = -0.4 - 0.4 u
  EXPECT_NEAR(bw["fit"]["eta"][0].get<double>(), -0.4, 0.2);
  EXPECT_NEAR(bw["fit"]["eta"][1].get<double>(), -0.4, 0.35);

  ASSERT_EQ(run("fit" + input + " --method scan --p 2 --kmax 1 --N 64 --S 32 --out " + path("scan")), 0)
      << slurp(path("stderr.txt"));
  std::ifstream table(path("scan/aic_table.csv"));
  int rows = 0;
  for (std::string line; std::getline(table, line);) ++rows;
  EXPECT_EQ(rows, 1 + 2 + 4);
}

TEST_F(CliTest, SpectrumWritesEstimateAndTruth) {
  ASSERT_EQ(run("simulate --model " + model("sweeping_peak_tvar2.json") + " --T 512 --out " +
                path("sim")),
            0);
  ASSERT_EQ(run("spectrum --input " + path("sim/realization.csv") + " --model " +
                model("sweeping_peak_tvar2.json") +
                " --method kernel --bt 0.2 --bf 0.3 --grid-u 4 --grid-l 8 --out " + path("s")),
            0)
      << slurp(path("stderr.txt"));
  std::ifstream in(path("s/spectrum.csv"));
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header.rfind("u,lambda,", 0), 0u) << header;
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  EXPECT_EQ(rows, 4 * 9);
  EXPECT_TRUE(fs::exists(path("s/spectrum.json")));

  ASSERT_EQ(run("spectrum --model " + model("sweeping_peak_tvar2.json") +
                " --grid-u 3 --grid-l 4 --out " + path("t")),
            0)
      << slurp(path("stderr.txt"));
  EXPECT_EQ(run("spectrum --out " + path("u")), 2);
}

TEST_F(CliTest, StationarityTestPrintsVerdict) {
  ASSERT_EQ(run("simulate --model " + model("ar1.json") + " --T 256 --seed 3 --out " + path("sim")), 0);
  ASSERT_EQ(run("test-stationarity --input " + path("sim/realization.csv") +
                " --reps 100 --seed 2 --grid-u 10 --grid-l 16 --out " + path("st")),
            0)
      << slurp(path("stderr.txt"));
  const std::string table = slurp(path("stdout.txt"));
  EXPECT_NE(table.find("critical"), std::string::npos) << table;
  const Json rep = read_json_file(path("st/stationarity.json"));
  EXPECT_EQ(rep["levels"].size(), 3u);
  EXPECT_EQ(rep["calibration"]["replications"], 100);
  EXPECT_EQ(run("test-stationarity --input " + path("sim/realization.csv") + " --reps 10 --out " +
                path("st2")),
            2);
}

TEST_F(CliTest, MatrixCheckTable) {
  ASSERT_EQ(run("matrix-check --model " + model("tvar1_linear.json") + " --T-grid 32,64 --out " +
                path("m")),
            0)
      << slurp(path("stderr.txt"));
  std::ifstream in(path("m/matrix_check.csv"));
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  EXPECT_EQ(rows, 1 + 2);
}
