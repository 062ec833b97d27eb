#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "multroot/cli.hpp"
#include "support.hpp"

using namespace multroot;

namespace {

const std::string data_dir = MULTROOT_DATA_DIR;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs the executable; returns (exit code, stdout).
std::pair<int, std::string> run_cli(const std::string& args) {
  const auto out = std::filesystem::temp_directory_path() / "multroot_cli_test.out";
  const std::string cmd = std::string("\"") + MULTROOT_CLI_PATH + "\" " + args + " > \"" + out.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  const int code = (status != -1 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
  return {code, slurp(out.string())};
}

}  // namespace

TEST(ParseInput, RealComplexCommentsBlankLines) {
  std::istringstream in("# header\n1\n\n  -2.5 0.5  # trailing\n3e-1\n");
  const Poly p = parse_input(in);
  ASSERT_EQ(p.size(), 3u);
  EXPECT_EQ(p[1], Complex(-2.5, 0.5));
  EXPECT_EQ(p[2], Complex(0.3, 0.0));
}

TEST(ParseInput, ErrorsCarryLineNumbers) {
  std::istringstream bad("1\n2\nabc\n");
  try {
    parse_input(bad);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  std::istringstream three("1 2 3\n");
  EXPECT_THROW(parse_input(three), ParseError);
  std::istringstream partial("1.5x\n");
  EXPECT_THROW(parse_input(partial), ParseError);
  std::istringstream empty("# nothing\n\n");
  EXPECT_THROW(parse_input(empty), ParseError);
  EXPECT_THROW(parse_input(std::string("/nonexistent/file.txt")), std::runtime_error);
}

TEST(ParseInput, DegreeTwentyDataFile) {
  const Poly p = parse_input(data_dir + "/p20.txt");
  ASSERT_EQ(p.degree(), 20u);
  EXPECT_EQ(p[20], Complex(0.4357949015));
  // known roots; the coefficients carry ten decimals
  const CVector z{{0.5, 1},   {0.5, -1},  {-1, 0.2},  {-1, -0.2}, {-0.1, 1},  {-0.1, -1}, {0.8, 0.6},
                  {0.8, -0.6}, {-0.7, 0.7}, {-0.7, -0.7}, {1.4, 0},  {-0.4, 0.9}, {-0.4, -0.9}, {0.9, 0},
                  {-0.8, 0.3}, {-0.8, -0.3}, {0.3, 0.8},  {0.3, -0.8}, {0.6, 0.4},  {0.6, -0.4}};
  const RootReport r = multroot::multroot(p);
  EXPECT_TRUE(r.multiplicities.all_simple());
  const auto m = testing_support::match_roots(r.roots, r.multiplicities, z, std::vector<int>(20, 1));
  EXPECT_LT(m.max_rel_error, 1e-8);
}

TEST(ParseOptions, StructureAndStart) {
  EXPECT_EQ(parse_structure("4,3,2,1"), (std::vector<int>{4, 3, 2, 1}));
  EXPECT_THROW(parse_structure("4,,1"), std::invalid_argument);
  EXPECT_THROW(parse_structure("0"), std::invalid_argument);
  EXPECT_THROW(parse_structure("2x"), std::invalid_argument);
  const CVector z = parse_z0("1.1,2:-0.5");
  ASSERT_EQ(z.size(), 2u);
  EXPECT_EQ(z[0], Complex(1.1, 0.0));
  EXPECT_EQ(z[1], Complex(2.0, -0.5));
  EXPECT_THROW(parse_z0("1:i"), std::invalid_argument);
}

TEST(Report, JsonRoundTrip) {
  RootReport r;
  r.roots = {Complex(1.0, -0.5), Complex(2.0, 0.0)};
  r.multiplicities = MultiplicityStructure{3, 1};
  r.backward_error = 1.5e-15;
  r.condition = 29.3;
  r.forward_error_estimate = 2 * 29.3 * 1.5e-15;
  r.converged = false;
  r.stage_info.gcd_root_ran = true;
  r.stage_info.pej_root_ran = true;
  r.stage_info.pej_root_iterations = 4;
  r.stage_info.normalization = Complex(2.0, 1.0);
  r.warnings = {"something"};
  const RootReport back = report_from_json(nlohmann::json::parse(report_to_json(r).dump()));
  EXPECT_EQ(back.roots, r.roots);
  EXPECT_EQ(back.multiplicities, r.multiplicities);
  EXPECT_EQ(back.backward_error, r.backward_error);
  EXPECT_EQ(back.condition, r.condition);
  EXPECT_EQ(back.converged, r.converged);
  EXPECT_EQ(back.stage_info.pej_root_iterations, 4);
  EXPECT_EQ(back.stage_info.normalization, r.stage_info.normalization);
  EXPECT_EQ(back.warnings, r.warnings);
}

TEST(Run, TextReportAndExitCodes) {
  CliConfig cfg;
  cfg.input = data_dir + "/p1.txt";
  std::ostringstream out, err;
  EXPECT_EQ(run(cfg, out, err), 0);
  EXPECT_NE(out.str().find("THE BACKWARD ERROR"), std::string::npos);
  EXPECT_NE(out.str().find("multiplicities"), std::string::npos);

  cfg.mode = "pejroot";
  std::ostringstream out2, err2;
  EXPECT_EQ(run(cfg, out2, err2), 1);
  EXPECT_NE(err2.str().find("--structure"), std::string::npos);

  cfg.input = data_dir + "/missing.txt";
  cfg.mode = "multroot";
  std::ostringstream out3, err3;
  EXPECT_EQ(run(cfg, out3, err3), 1);
}

TEST(Run, PejRootModeWithStartAndGcdRootMode) {
  CliConfig cfg;
  cfg.input = data_dir + "/p1.txt";
  cfg.mode = "pejroot";
  cfg.structure = std::vector<int>{4, 3, 2, 1};
  cfg.z0 = CVector{1.1, 1.9, 3.1, 3.9};
  cfg.json = true;
  std::ostringstream out, err;
  ASSERT_EQ(run(cfg, out, err), 0) << err.str();
  const RootReport r = report_from_json(nlohmann::json::parse(out.str()));
  EXPECT_NEAR(r.roots[0].real(), 1.0, 1e-13);
  EXPECT_NEAR(r.roots[3].real(), 4.0, 1e-13);

  cfg.z0.reset();  // starting values from gcd_root
  std::ostringstream out2, err2;
  ASSERT_EQ(run(cfg, out2, err2), 0) << err2.str();

  cfg.mode = "gcdroot";
  std::ostringstream out3, err3;
  ASSERT_EQ(run(cfg, out3, err3), 0) << err3.str();
  const RootReport g = report_from_json(nlohmann::json::parse(out3.str()));
  EXPECT_TRUE(g.stage_info.gcd_root_ran);
  EXPECT_FALSE(g.stage_info.pej_root_ran);
}

TEST(Executable, JsonOnComplexData) {
  const auto [code, text] = run_cli("\"" + data_dir + "/complex.txt\" --json");
  ASSERT_EQ(code, 0) << text;
  const RootReport r = report_from_json(nlohmann::json::parse(text));
  const CVector exact{Complex(0.3, 0.6), Complex(-1.0, 0.0), Complex(0.0, 2.0)};
  const auto m = testing_support::match_roots(r.roots, r.multiplicities, exact, {3, 2, 1});
  EXPECT_TRUE(m.multiplicities_agree);
  EXPECT_GE(m.digits(), 13.0);
}

TEST(Executable, ClusteredTextAndBadOptions) {
  const auto [code, text] = run_cli("\"" + data_dir + "/clustered.txt\" --digits 10");
  EXPECT_EQ(code, 0) << text;
  EXPECT_NE(text.find("18"), std::string::npos);
  EXPECT_EQ(run_cli("\"" + data_dir + "/p1.txt\" --mode nope").first, 1);
  EXPECT_EQ(run_cli("\"" + data_dir + "/p1.txt\" --digits 40").first, 1);
  EXPECT_EQ(run_cli("\"" + data_dir + "/p1.txt\" --mode pejroot --structure 4,3,x").first, 1);
  EXPECT_EQ(run_cli("--help").first, 0);
}
