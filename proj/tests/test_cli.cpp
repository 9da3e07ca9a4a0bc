#include <gtest/gtest.h>

#include "commands.hpp"
#include "entest/errors.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace entest::cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "entest-cli");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(line);
  }
  return out;
}

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("entest_cli_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Cli, SpectrumThreeCopies) {
  const auto r = run_cli({"spectrum", "--n", "3", "--b", "0.5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], "k,j,d_j,n_j,b,weight,eigenvalue");
  EXPECT_EQ(rows[1].rfind("1,3/2,1,16,0.5,", 0), 0u) << rows[1];
  EXPECT_EQ(rows[2].rfind("2,1/2,2,4,0.5,", 0), 0u) << rows[2];
}

TEST(Cli, SpectrumSingleCopy) {
  const auto r = run_cli({"spectrum", "--n", "1", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = Json::parse(r.out);
  ASSERT_EQ(doc["rows"].size(), 1u);
  EXPECT_EQ(doc["rows"][0]["eigenvalue"].get<double>(), 0.25);
  EXPECT_EQ(doc["rows"][0]["j"], "1/2");
}

TEST(Cli, SpectrumRejectsZeroCopies) {
  const auto r = run_cli({"spectrum", "--n", "0"});
  EXPECT_EQ(r.code, exit_validation);
  EXPECT_NE(r.err.find("error"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, SpectrumHugeMultiplicityIsString) {
  const auto r = run_cli({"spectrum", "--n", "200", "--format", "json"});
  ASSERT_EQ(r.code, 0);
  const auto doc = Json::parse(r.out);
  EXPECT_TRUE(doc["rows"][50]["d_j"].is_string());
  EXPECT_TRUE(doc["rows"][0]["d_j"].is_number());
}

TEST(Cli, TableReproducesValues) {
  const auto r = run_cli({"table", "--n", "1,2,3,4,5,10,20,40,60,80", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = Json::parse(r.out);
  EXPECT_EQ(doc["schema_version"], schema_version);
  EXPECT_EQ(doc["command"], "table");
  EXPECT_EQ(doc["metadata"]["unit"], "bits");
  const double expected[] = {0, 0.03751, 0.08397, 0.13259, 0.18059, 0.39245, 0.69639, 1.07422, 1.32005, 1.50261};
  ASSERT_EQ(doc["rows"].size(), 10u);
  for (std::size_t i = 0; i < 10; ++i) EXPECT_NEAR(doc["rows"][i]["gain"].get<double>(), expected[i], 1e-4);
  EXPECT_EQ(doc["rows"][0]["gain"].get<double>(), 0.0);
}

TEST(Cli, TableNats) {
  const auto r = run_cli({"table", "--n", "2", "--nats"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 2u);
  const double gain = std::stod(rows[1].substr(rows[1].find(',') + 1));
  EXPECT_NEAR(gain, 0.03751 * std::log(2.0), 1e-5);
}

TEST(Cli, TableRangesAndErrors) {
  const auto r = run_cli({"table", "--n", "40:80:20"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(lines(r.out).size(), 4u);
  EXPECT_EQ(run_cli({"table", "--n", ""}).code, exit_validation);
  EXPECT_EQ(run_cli({"table", "--n", ","}).code, exit_validation);
  EXPECT_EQ(run_cli({"table", "--n", "2", "--prior", "cubic"}).code, exit_validation);
  EXPECT_EQ(run_cli({"table", "--n", "2", "--prior", "poly:2"}).code, exit_validation);
  EXPECT_EQ(run_cli({"table", "--n", "2", "--nodes", "1"}).code, exit_validation);
  EXPECT_EQ(run_cli({"table", "--n", "2", "--format", "xml"}).code, exit_validation);
  EXPECT_EQ(run_cli({"table"}).code, exit_validation);
  EXPECT_EQ(run_cli({}).code, exit_validation);
  EXPECT_EQ(run_cli({"--help"}).code, exit_ok);
}

TEST(Cli, PolynomialPrior) {
  const auto a = run_cli({"table", "--n", "2", "--prior", "poly:0,0,3"});
  const auto b = run_cli({"table", "--n", "2", "--prior", "quadratic"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(lines(a.out)[1], lines(b.out)[1]);
  const auto u = run_cli({"table", "--n", "2", "--prior", "uniform", "--format", "json"});
  EXPECT_NEAR(Json::parse(u.out)["rows"][0]["gain"].get<double>(), 0.034809, 1e-6);
}

TEST(Cli, FitFromTableFile) {
  const auto dir = temp_dir("fit");
  const auto csv = (dir / "table.csv").string();
  ASSERT_EQ(run_cli({"table", "--n", "20:80:10", "--output", csv}).code, 0);
  const auto r = run_cli({"fit", "--input", csv, "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = Json::parse(r.out);
  EXPECT_EQ(doc["rows"][0]["points"], 5);
  const double slope = doc["rows"][0]["slope"].get<double>();
  EXPECT_GE(slope, 0.41);
  EXPECT_LE(slope, 0.47);
  EXPECT_EQ(run_cli({"fit", "--input", csv, "--min-n", "80"}).code, exit_validation);
  EXPECT_EQ(run_cli({"fit", "--input", (dir / "missing.csv").string()}).code, exit_validation);
  EXPECT_EQ(run_cli({"fit"}).code, exit_validation);
}

TEST(Cli, FitComputed) {
  const auto r = run_cli({"fit", "--n", "40:80:10"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines(r.out)[0], "slope,intercept,points");
}

TEST(Cli, OracleQuadrature) {
  const auto r = run_cli({"oracle", "--n", "2", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = Json::parse(r.out);
  EXPECT_TRUE(doc["metadata"]["passed"].get<bool>());
  EXPECT_EQ(doc["rows"].size(), 8u);
  EXPECT_EQ(run_cli({"oracle", "--n", "5"}).code, exit_validation);
  EXPECT_EQ(run_cli({"oracle", "--n", "2", "--method", "exact"}).code, exit_validation);
}

TEST(Cli, OracleMonteCarlo) {
  const auto r = run_cli({"oracle", "--n", "2", "--method", "mc", "--budget", "2000", "--seed", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, run_cli({"oracle", "--n", "2", "--method", "mc", "--budget", "2000", "--seed", "4"}).out);
}

TEST(Cli, Local) {
  const auto r = run_cli({"local", "--n", "1,2,3", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = Json::parse(r.out);
  EXPECT_EQ(doc["rows"][0]["gain"].get<double>(), 0.0);
  EXPECT_NEAR(doc["rows"][1]["gain"].get<double>(), 0.03751, 1e-4);
  EXPECT_NEAR(doc["rows"][2]["gain"].get<double>(), 0.08397, 1e-4);
}

TEST(Cli, SimulateDeterministic) {
  const std::vector<std::string> args{"simulate", "--n", "3", "--trials", "2000", "--seed", "5", "--trace"};
  const auto a = run_cli(args);
  const auto b = run_cli(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(lines(a.out).size(), 2001u);
  auto other = args;
  other[6] = "6";
  EXPECT_NE(run_cli(other).out, a.out);
}

TEST(Cli, SimulateSummaryJson) {
  const auto r = run_cli({"simulate", "--n", "2", "--trials", "10000", "--seed", "1", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = Json::parse(r.out);
  EXPECT_EQ(doc["metadata"]["seed"], 1);
  EXPECT_TRUE(doc["metadata"]["fixed_b"].is_null());
  EXPECT_NEAR(doc["rows"][0]["frequency"].get<double>(), 0.9, 0.015);
  EXPECT_EQ(run_cli({"simulate", "--n", "2", "--trials", "0"}).code, exit_validation);
  EXPECT_EQ(run_cli({"simulate", "--n", "2", "--fixed-b", "2"}).code, exit_validation);
}

TEST(Cli, OutputDirectoryFromEnvironment) {
  const auto dir = temp_dir("env");
  ::setenv("ENTEST_OUTPUT_DIR", dir.c_str(), 1);
  const auto r = run_cli({"spectrum", "--n", "2", "--output", "sub/spec.csv"});
  ::unsetenv("ENTEST_OUTPUT_DIR");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(dir / "sub" / "spec.csv");
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "k,j,d_j,n_j,b,weight,eigenvalue\r");
  EXPECT_EQ(resolve_output_path("/abs/x.csv"), "/abs/x.csv");
}

TEST(Cli, CsvQuoting) {
  Table t;
  t.columns = {"a", "b,c"};
  t.rows.push_back({Json("x\"y"), Json(1.5)});
  t.rows.push_back({Json("line\nbreak"), Json(nullptr)});
  EXPECT_EQ(to_csv(t), "a,\"b,c\"\r\n\"x\"\"y\",1.5\r\n\"line\nbreak\",\r\n");
}

TEST(Cli, ListParsing) {
  EXPECT_EQ(parse_int_list("1,3:5,10:20:5"), (std::vector<int>{1, 3, 4, 5, 10, 15, 20}));
  EXPECT_THROW(parse_int_list("5:1"), entest::ValidationError);
  EXPECT_THROW(parse_int_list("1.5"), entest::ValidationError);
  EXPECT_EQ(parse_double_list("0,0.5,1"), (std::vector<double>{0, 0.5, 1}));
  EXPECT_THROW(parse_double_list("0.5x"), entest::ValidationError);
  EXPECT_EQ(round6(0.0375055683), 0.037506);
  EXPECT_FALSE(std::signbit(round6(-1e-9)));
}
