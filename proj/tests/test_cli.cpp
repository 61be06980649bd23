#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "palcanon/cli.hpp"
#include "palcanon/matrix_io.hpp"

using namespace palcanon;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp(const std::string& name) { return std::filesystem::temp_directory_path() / name; }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Cli, HelpAndUsageErrors) {
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"bogus"}).code, 1);
  EXPECT_EQ(run({"classify", "--star", "x", "--input", "nope"}).code, 1);
  EXPECT_EQ(run({"classify", "--star", "h", "--input", "/nonexistent/file"}).code, 1);
}

TEST(Cli, SynthThenClassify) {
  const auto m = temp("palcanon_cli_synth.txt");
  const CliRun s = run({"synth", "--star", "h", "--n", "25", "--ell", "7", "--seed", "1", "--out", m.string()});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_NE(s.out.find("truth class=G* ell=7"), std::string::npos) << s.out;
  const CliRun c = run({"classify", "--star", "h", "--input", m.string()});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_NE(c.out.find("class=G* ell=7"), std::string::npos) << c.out;
  std::filesystem::remove(m);
}

TEST(Cli, SynthToStdoutIsParseable) {
  const CliRun s = run({"synth", "--star", "t", "--n", "5", "--seed", "3"});
  ASSERT_EQ(s.code, 0) << s.err;
  const CMatrix a = parse_matrix(s.out);
  EXPECT_EQ(a.rows(), 5u);
  EXPECT_NE(s.err.find("truth class=Gc"), std::string::npos);
  EXPECT_EQ(run({"synth", "--star", "t", "--n", "5", "--seed", "3"}).out, s.out);
}

TEST(Cli, ClassifyZeroMatrix) {
  const auto m = temp("palcanon_cli_zero.txt");
  write_matrix(CMatrix::zeros(3, 3), m);
  const CliRun c = run({"classify", "--star", "h", "--input", m.string()});
  EXPECT_EQ(c.code, 0);
  EXPECT_NE(c.out.find("class=NG"), std::string::npos);
  EXPECT_NE(c.out.find("reason=Singular"), std::string::npos);
  std::filesystem::remove(m);
}

TEST(Cli, ClassifyWritesEigenvalueCsv) {
  const auto m = temp("palcanon_cli_h.txt");
  const auto csv = temp("palcanon_cli_eigs.csv");
  const CliRun b = run({"block", "h", "--k", "1", "--mu", "3+0i"});
  ASSERT_EQ(b.code, 0) << b.err;
  std::ofstream(m) << b.out;
  const CliRun c = run({"classify", "--star", "h", "--input", m.string(), "--eigs-csv", csv.string()});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_NE(c.out.find("class=G* ell=1"), std::string::npos);
  EXPECT_EQ(slurp(csv).rfind("index,re,im,modulus,label\n", 0), 0u);
  std::filesystem::remove(m);
  std::filesystem::remove(csv);
}

TEST(Cli, BlockOutput) {
  const CliRun g = run({"block", "gamma", "--k", "2"});
  ASSERT_EQ(g.code, 0);
  EXPECT_EQ(parse_matrix(g.out), (CMatrix{{0.0, -1.0}, {1.0, 1.0}}));
  const CliRun j = run({"block", "j0", "--k", "2"});
  EXPECT_EQ(parse_matrix(j.out), (CMatrix{{0.0, 1.0}, {0.0, 0.0}}));
  EXPECT_EQ(run({"block", "gamma", "--k", "0"}).code, 1);
  EXPECT_EQ(run({"block", "h", "--k", "1"}).code, 1);
}

TEST(Cli, Perturb) {
  const CliRun p = run({"perturb", "h", "--k", "2", "--mu", "2+0i", "--delta", "1e-3", "--star", "h"});
  ASSERT_EQ(p.code, 0) << p.err;
  EXPECT_NE(p.out.find("convention=direct"), std::string::npos) << p.out;
  const CliRun g = run({"perturb", "gamma-even", "--k", "4", "--delta", "1e-3", "--star", "t"});
  EXPECT_EQ(g.code, 0) << g.err;
  const CliRun o = run({"perturb", "gamma-odd", "--k", "3", "--delta", "1e-3", "--star", "h"});
  EXPECT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(run({"perturb", "gamma-odd", "--k", "3", "--delta", "0.5", "--star", "h"}).code, 1);
}

TEST(Cli, ExperimentTransposeControl) {
  const auto f = temp("palcanon_cli_freq.csv");
  const auto s = temp("palcanon_cli_scatter.csv");
  const CliRun e = run({"experiment", "--star", "t", "--n", "24", "--trials", "100", "--gen", "uniform", "--seed", "7",
                     "--out-freq", f.string(), "--out-scatter", s.string()});
  ASSERT_EQ(e.code, 0) << e.err;
  EXPECT_EQ(slurp(f), "unit_count,frequency\n0,100\n");
  const std::string scatter = slurp(s);
  EXPECT_EQ(std::count(scatter.begin(), scatter.end(), '\n'), 101);
  std::filesystem::remove(f);
  std::filesystem::remove(s);
}

TEST(Cli, ExperimentThreadsByteIdentical) {
  const auto f1 = temp("palcanon_cli_t1.csv");
  const auto f2 = temp("palcanon_cli_t2.csv");
  ASSERT_EQ(run({"experiment", "--star", "h", "--n", "9", "--trials", "50", "--seed", "4", "--threads", "1",
                 "--out-freq", f1.string()})
                .code,
            0);
  ASSERT_EQ(run({"experiment", "--star", "h", "--n", "9", "--trials", "50", "--seed", "4", "--threads", "3",
                 "--out-freq", f2.string()})
                .code,
            0);
  EXPECT_EQ(slurp(f1), slurp(f2));
  std::filesystem::remove(f1);
  std::filesystem::remove(f2);
}

TEST(Cli, Selftest) {
  const CliRun s = run({"selftest"});
  EXPECT_EQ(s.code, 0) << s.out;
  EXPECT_NE(s.out.find("selftest passed"), std::string::npos);
  EXPECT_EQ(s.out.find("FAIL"), std::string::npos);
}

TEST(Cli, BinaryExitCodes) {
  const char* bin = std::getenv("PALCANON_BIN");
  if (bin == nullptr) GTEST_SKIP() << "PALCANON_BIN not set";
  const std::string b = std::string("'") + bin + "'";
  auto status = [](const std::string& cmd) { return WEXITSTATUS(std::system((cmd + " >/dev/null 2>&1").c_str())); };
  EXPECT_EQ(status(b + " --help"), 0);
  EXPECT_EQ(status(b + " block gamma --k 3"), 0);
  EXPECT_EQ(status(b + " block gamma --k 0"), 1);
  const auto m = temp("palcanon_cli_near.txt");
  write_matrix(CMatrix{{1.0, 0.0}, {0.0, 1e-15}}, m);
  EXPECT_EQ(status(b + " classify --star h --input '" + m.string() + "'"), 0);
  std::filesystem::remove(m);
}
