#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "entropygate/cli.hpp"
#include "entropygate/table_io.hpp"

using namespace entropygate;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
  ReportDocument doc() const {
    std::istringstream in(out);
    return ReportDocument::parse(in);
  }
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "entropygate_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p);
  f << text;
}

}  // namespace

TEST(Cli, ThermoPolytropic) {
  const auto r = run_cli({"thermo", "--rho", "2", "--e", "3", "--no-timestamp"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto d = r.doc();
  EXPECT_NEAR(d.number("thermo.p"), 2.4, 1e-14);
  EXPECT_NEAR(d.number("thermo.T"), 3.0, 1e-14);
  EXPECT_EQ(d.get("tool.version"), std::string(kToolVersion));
  EXPECT_FALSE(d.get("timestamp").has_value());
}

TEST(Cli, ThermoTimestampPresentByDefault) {
  const auto r = run_cli({"thermo", "--rho", "1", "--e", "1"});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.doc().get("timestamp").has_value());
}

TEST(Cli, ThermoNegativeTemperatureWarns) {
  const auto r = run_cli({"thermo", "--model", "neg-temp", "--rho", "1", "--e", "1", "--no-timestamp"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("WARNING: NEGATIVE-TEMPERATURE"), std::string::npos) << r.out;
  EXPECT_NEAR(r.doc().number("thermo.T"), -0.5, 1e-15);
}

TEST(Cli, ThermoRejectsNonPositiveDensity) {
  EXPECT_EQ(run_cli({"thermo", "--rho", "0", "--e", "1"}).code, 2);
  EXPECT_EQ(run_cli({"thermo", "--rho", "-1", "--e", "1"}).code, 2);
}

TEST(Cli, UnknownModelAndMissingArgs) {
  EXPECT_EQ(run_cli({"thermo", "--model", "vdw", "--rho", "1", "--e", "1"}).code, 2);
  EXPECT_EQ(run_cli({"thermo", "--rho", "1"}).code, 2);
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
}

TEST(Cli, HelpExitsZero) {
  EXPECT_EQ(run_cli({"--help"}).code, 0);
  EXPECT_EQ(run_cli({"certify", "--help"}).code, 0);
}

TEST(Cli, CertifyAllPolytropicPasses) {
  const auto r = run_cli({"certify", "--check", "all", "--no-timestamp"});
  ASSERT_EQ(r.code, 0) << r.out << r.err;
  const auto d = r.doc();
  EXPECT_EQ(d.get("certify.pass"), "true");
  EXPECT_EQ(d.get("prop3.consistent"), "true");
  EXPECT_EQ(d.get("wagner.matches_eta"), "true");
  EXPECT_NE(r.out.find("PROP3: consistent"), std::string::npos);
}

TEST(Cli, CertifyAllViolatingModelsExitOne) {
  for (const std::string m : {"pathological", "neg-temp"}) {
    const auto r = run_cli({"certify", "--check", "all", "--model", m, "--no-timestamp"});
    EXPECT_EQ(r.code, 1) << m << '\n' << r.out << r.err;
    const auto d = r.doc();
    EXPECT_EQ(d.get("prop3.consistent"), "true") << m;
    EXPECT_EQ(d.get("prop3.eta_convex"), "false") << m;
  }
}

TEST(Cli, CertifySingleChecks) {
  EXPECT_EQ(run_cli({"certify", "--check", "sigma"}).code, 0);
  EXPECT_EQ(run_cli({"certify", "--check", "sigma", "--model", "pathological"}).code, 1);
  EXPECT_EQ(run_cli({"certify", "--check", "temperature", "--model", "neg-temp"}).code, 1);
  EXPECT_EQ(run_cli({"certify", "--check", "wagner"}).code, 0);
  EXPECT_EQ(run_cli({"certify", "--check", "eta", "--sampling", "random", "--samples", "64"}).code, 0);
}

TEST(Cli, CertifyMalformedRegionIsUsageError) {
  EXPECT_EQ(run_cli({"certify", "--check", "sigma", "--extensive", "2:1,0.5:2,0.5:2"}).code, 2);
  EXPECT_EQ(run_cli({"certify", "--check", "sigma", "--extensive", "0.5:2,0.5:2"}).code, 2);
  EXPECT_EQ(run_cli({"certify", "--check", "sigma", "--extensive", "a:b,0.5:2,0.5:2"}).code, 2);
  EXPECT_EQ(run_cli({"certify", "--check", "nonsense"}).code, 2);
}

TEST(Cli, CertifyReportRoundTripsThroughFile) {
  const auto path = scratch("report.txt");
  const auto r = run_cli({"certify", "--check", "sigma", "--output", path.string(), "--no-timestamp"});
  ASSERT_EQ(r.code, 0);
  std::ifstream f(path);
  const auto from_file = ReportDocument::parse(f);
  const auto from_stdout = r.doc();
  EXPECT_EQ(from_file.entries(), from_stdout.entries());
  EXPECT_EQ(from_file.number("sigma.worst_eigenvalue"), from_stdout.number("sigma.worst_eigenvalue"));
}

TEST(Cli, SeedFromEnvironment) {
  ::setenv("ENTROPYGATE_SEED", "123", 1);
  const auto r = run_cli({"certify", "--check", "sigma", "--sampling", "random", "--samples", "20"});
  ::unsetenv("ENTROPYGATE_SEED");
  EXPECT_EQ(r.doc().get("certify.seed"), "123");
  const auto s = run_cli({"certify", "--check", "sigma", "--sampling", "random", "--samples", "20", "--seed", "9"});
  EXPECT_EQ(s.doc().get("certify.seed"), "9");
}

TEST(Cli, SimulateSod) {
  const auto diag = scratch("diag.csv"), prof = scratch("prof.csv");
  const auto r = run_cli({"simulate", "--n", "100", "--diagnostics", diag.string(), "--profile", prof.string(),
                          "--no-timestamp"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("min dS per step ≥ 0"), std::string::npos);
  EXPECT_NE(r.out.find("total entropy produced = "), std::string::npos);
  EXPECT_GT(r.doc().number("simulate.entropy_produced"), 0.0);
  std::ifstream d(diag);
  std::string header;
  std::getline(d, header);
  EXPECT_EQ(header, "# t,entropy_total,dS,mass,momentum,energy");
  EXPECT_TRUE(fs::exists(prof));
}

TEST(Cli, SimulateRefinement) {
  const auto r = run_cli({"simulate", "--initial", "smooth", "--n", "50,100", "--refine", "--t-end", "0.1",
                          "--diagnostics", scratch("d2.csv").string(), "--profile", scratch("p2.csv").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("observed entropy-drift order = "), std::string::npos);
  EXPECT_GT(r.doc().number("refine.observed_order"), 0.5);
}

TEST(Cli, SimulateBadCflIsUsageError) {
  EXPECT_EQ(run_cli({"simulate", "--cfl", "1.5"}).code, 2);
  EXPECT_EQ(run_cli({"simulate", "--cfl", "0"}).code, 2);
  EXPECT_EQ(run_cli({"simulate", "--n", "50,100"}).code, 2);
}

TEST(Cli, SimulateNonPolytropicNeedsCustomCells) {
  EXPECT_EQ(run_cli({"simulate", "--model", "neg-temp"}).code, 2);
}

TEST(Cli, SimulateAbortExitsThree) {
  // Colliding streams heat the gas past the top of the table.
  const auto table = scratch("collide.tbl");
  ASSERT_EQ(run_cli({"tabulate", "--n-rho", "32", "--n-e", "32", "--output", table.string()}).code, 0);
  const auto cells = scratch("collide.txt");
  std::ostringstream rows;
  for (int i = 0; i < 8; ++i) rows << (i < 4 ? "1 1.5 2.625\n" : "1 -1.5 2.625\n");
  write_file(cells, rows.str());
  const auto r = run_cli({"simulate", "--model", "tabulated", "--table", table.string(), "--initial", "custom",
                          "--cells", cells.string(), "--n", "8", "--boundary", "transmissive", "--diagnostics",
                          scratch("d3.csv").string(), "--profile", scratch("p3.csv").string()});
  EXPECT_EQ(r.code, 3) << r.out << r.err;
  EXPECT_NE(r.err.find("simulation aborted"), std::string::npos);
}

TEST(Cli, TabulateThenUseTable) {
  const auto table = scratch("poly.tbl");
  ASSERT_EQ(run_cli({"tabulate", "--n-rho", "64", "--n-e", "64", "--output", table.string()}).code, 0);
  const auto r = run_cli({"thermo", "--model", "tabulated", "--table", table.string(), "--rho", "1.2", "--e",
                          "1.3", "--no-timestamp"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(r.doc().number("thermo.p"), 0.4 * 1.2 * 1.3, 1e-3 * 0.624);
}

TEST(Cli, TableLoadErrorsAreUsageErrors) {
  const auto bad_axis = scratch("bad_axis.tbl");
  write_file(bad_axis, "rho-axis: 1 3 2\ne-axis: 1 2\n0 0\n0 0\n0 0\n");
  auto r = run_cli({"thermo", "--model", "tabulated", "--table", bad_axis.string(), "--rho", "1.5", "--e", "1.5"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("rho-axis"), std::string::npos) << r.err;

  const auto bad_rows = scratch("bad_rows.tbl");
  write_file(bad_rows, "rho-axis: 1 2 3\ne-axis: 1 2\n0 0\n0 0\n");
  r = run_cli({"thermo", "--model", "tabulated", "--table", bad_rows.string(), "--rho", "1.5", "--e", "1.5"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("expected 3"), std::string::npos) << r.err;

  EXPECT_EQ(run_cli({"thermo", "--model", "tabulated", "--rho", "1", "--e", "1"}).code, 2);
  EXPECT_EQ(run_cli({"thermo", "--model", "tabulated", "--table", "/nonexistent/x", "--rho", "1", "--e", "1"}).code, 2);
}

TEST(Cli, OutsideTableIsUsageError) {
  const auto table = scratch("small.tbl");
  ASSERT_EQ(run_cli({"tabulate", "--n-rho", "8", "--n-e", "8", "--output", table.string()}).code, 0);
  EXPECT_EQ(run_cli({"thermo", "--model", "tabulated", "--table", table.string(), "--rho", "9", "--e", "1"}).code, 2);
}

TEST(Cli, BinaryExitCodes) {
  const std::string bin = ENTROPYGATE_CLI_PATH;
  EXPECT_EQ(std::system((bin + " thermo --rho 1 --e 1 > /dev/null").c_str()), 0);
  EXPECT_NE(std::system((bin + " thermo --rho 0 --e 1 > /dev/null 2>&1").c_str()), 0);
}

TEST(Report, FormatAndParse) {
  ReportDocument d;
  d.set("a.x", 0.1);
  d.set("a.flag", true);
  d.set("a.n", std::size_t{7});
  d.set("a.x", 0.25);
  d.note("free text");
  std::ostringstream out;
  d.emit(out);
  std::istringstream in(out.str());
  const auto back = ReportDocument::parse(in);
  EXPECT_EQ(back.number("a.x"), 0.25);
  EXPECT_EQ(back.get("a.flag"), "true");
  EXPECT_EQ(back.get("a.n"), "7");
  EXPECT_EQ(back.entries().size(), 3u);
  EXPECT_EQ(ReportDocument::format_number(0.1), "0.10000000000000001");
}

TEST(Cli, OutputIsDeterministic) {
  const std::vector<std::string> args{"certify", "--check", "all", "--sampling", "random", "--samples", "64",
                                      "--no-timestamp"};
  const auto a = run_cli(args), b = run_cli(args);
  EXPECT_EQ(a.out, b.out);
}
