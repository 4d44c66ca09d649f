#include "cli.hpp"

#include "pdsplit/harness/trace.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace pdsplit::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("pdsplit_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return run_cli(args, out_, err_);
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(CliTest, SolveWritesTraceAndReportsConvergence) {
  const fs::path trace = dir_ / "trace.csv";
  ASSERT_EQ(run({"solve", "--kind", "affine_pd", "--dim", "4", "--seed", "7", "--gamma", "1",
                 "--mu", "1", "--lambda", "1.8", "--out", trace.string()}),
            kOk);
  EXPECT_NE(out_.str().find("reason converged"), std::string::npos) << out_.str();
  std::ifstream f(trace);
  const auto recs = harness::read_trace_csv(f);
  ASSERT_FALSE(recs.empty());
  EXPECT_LE(recs.back().kt_res, 1e-8);
  EXPECT_TRUE(recs.back().dist_to_oracle.has_value());
}

TEST_F(CliTest, SolveIsDeterministic) {
  const fs::path a = dir_ / "a.csv", b = dir_ / "b.csv";
  ASSERT_EQ(run({"solve", "--kind", "consensus", "--dim", "2,2,2", "--seed", "3", "--out", a.string()}), kOk);
  const std::string report_a = out_.str();
  ASSERT_EQ(run({"solve", "--kind", "consensus", "--dim", "2,2,2", "--seed", "3", "--out", b.string()}), kOk);
  EXPECT_EQ(out_.str().substr(0, out_.str().find("trace")),
            report_a.substr(0, report_a.find("trace")));
  std::ifstream fa(a), fb(b);
  auto ra = harness::read_trace_csv(fa), rb = harness::read_trace_csv(fb);
  ASSERT_EQ(ra.size(), rb.size());
  for (std::size_t n = 0; n < ra.size(); ++n) {
    ra[n].wall_ns = rb[n].wall_ns = 0;
    EXPECT_EQ(ra[n], rb[n]);
  }
}

TEST_F(CliTest, SweepWritesOneFilePerCellWithIdenticalHeaders) {
  ASSERT_EQ(run({"sweep", "--lambda", "0.5,1.0,1.9", "--outdir", dir_.string()}), kOk);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir_)) files.push_back(e.path());
  ASSERT_EQ(files.size(), 3u);
  for (const auto& p : files) {
    std::ifstream f(p);
    std::string header;
    std::getline(f, header);
    EXPECT_EQ(header, harness::kTraceHeader);
  }
}

TEST_F(CliTest, ConfigFileWithFlagOverride) {
  const fs::path cfg = dir_ / "run.ini";
  std::ofstream(cfg) << "kind=lasso\ndim=8,4\nseed=3\nlambda=1.0\n";
  const fs::path trace = dir_ / "t.csv";
  ASSERT_EQ(run({"solve", "--config", cfg.string(), "--lambda", "1.8", "--out", trace.string()}),
            kOk)
      << err_.str();
  EXPECT_NE(out_.str().find("kind lasso"), std::string::npos);
  const std::string with_override = out_.str();
  ASSERT_EQ(run({"solve", "--config", cfg.string(), "--out", trace.string()}), kOk);
  // lambda differs (1.0 from the file vs 1.8 from the flag), so do the iteration counts.
  EXPECT_NE(out_.str().substr(0, out_.str().find("kt_res")),
            with_override.substr(0, with_override.find("kt_res")));
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}), kUsage);
  EXPECT_EQ(run({"solve", "--no-such-flag"}), kUsage);
  EXPECT_EQ(run({"solve", "--kind", "unknown"}), kUsage);
  EXPECT_EQ(run({"solve", "--gamma", "0", "--out", (dir_ / "x.csv").string()}), kUsage);
  EXPECT_EQ(run({"solve", "--dim", "0"}), kUsage);
  const fs::path cfg = dir_ / "bad.ini";
  std::ofstream(cfg) << "bogus=1\n";
  EXPECT_EQ(run({"solve", "--config", cfg.string()}), kUsage);
}

TEST_F(CliTest, NumericFailureExitsThreeWithIteration) {
  // An astronomically scaled L overflows the step.
  EXPECT_EQ(run({"solve", "--kind", "normfree_stress", "--norm-scale", "1e200", "--out",
                 (dir_ / "x.csv").string()}),
            kNumeric);
  EXPECT_NE(err_.str().find("iteration"), std::string::npos) << err_.str();
}

TEST_F(CliTest, HelpExitsZero) {
  EXPECT_EQ(run({"--help"}), kOk);
  EXPECT_NE(out_.str().find("solve"), std::string::npos);
}

}  // namespace
}  // namespace pdsplit::cli
