#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "app.hpp"
#include "problem_file.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kData = FRACVAR_TEST_DATA_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::initializer_list<std::string> args) {
  std::vector<std::string> storage{"fracvar"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : storage) argv.push_back(s.c_str());
  std::ostringstream out, err;
  const int code = fracvar::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  std::istringstream h(line);
  for (std::string cell; std::getline(h, cell, ',');) t.header.push_back(cell);
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '{') continue;
    std::istringstream r(line);
    std::vector<double> row;
    for (std::string cell; std::getline(r, cell, ',');) row.push_back(std::stod(cell));
    t.rows.push_back(row);
  }
  return t;
}

json last_json_line(const std::string& text) {
  const auto pos = text.rfind('{');
  return json::parse(text.substr(pos));
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("fracvar_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& content) const {
    std::ofstream(dir_ / name, std::ios::binary) << content;
    return path(name);
  }

  std::string problem(const json& j) const { return write("problem.json", j.dump()); }

  static json classical() { return json::parse(slurp(kData / "classical.json")); }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, SolveIsoperimetricFile) {
  const auto r = run({"solve", (kData / "energy_alpha_half.json").string(), "--out", path("sol")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_TRUE(j["converged"].get<bool>());
  EXPECT_NEAR(j["lambda"].get<double>(), 2.0, 5e-2);
  EXPECT_LE(std::abs(j["constraint_residual"].get<double>()), 1e-9);
  for (const char* key : {"objective", "el_norm", "iterations", "inner_iterations", "grad_norm"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  const auto csv = parse_csv(slurp(path("sol") + ".csv"));
  EXPECT_EQ(csv.header, (std::vector<std::string>{"t", "y", "v", "el_residual"}));
  EXPECT_EQ(csv.rows.size(), 1001u);
  EXPECT_EQ(csv.rows.front()[0], 0.0);
  EXPECT_EQ(csv.rows.back()[0], 1.0);
}

TEST_F(CliTest, SolveClassicalFile) {
  const auto r = run({"solve", (kData / "classical.json").string(), "--out", path("c")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["objective"].get<double>(), 1.0, 1e-10);
  EXPECT_TRUE(j["lambda"].is_null());
  EXPECT_TRUE(j["constraint_residual"].is_null());
  for (const auto& row : parse_csv(slurp(path("c") + ".csv")).rows) {
    EXPECT_NEAR(row[1], row[0], 1e-6);
  }
}

TEST_F(CliTest, SolveDefaultsCsvNameToFileStem) {
  const auto file = write("myproblem.json", classical().dump());
  const auto cwd = fs::current_path();
  fs::current_path(dir_);
  const auto r = run({"--quiet", "solve", file, "--n", "21"});
  fs::current_path(cwd);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.err.empty());
  EXPECT_EQ(parse_csv(slurp(dir_ / "myproblem.csv")).rows.size(), 21u);
  EXPECT_EQ(json::parse(r.out)["n"].get<int>(), 21);
}

TEST_F(CliTest, OutOfRangeOrderIsUsageError) {
  const auto r = run({"solve", (kData / "bad_alpha.json").string(), "--out", path("x")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("(0,1)"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("alpha"), std::string::npos) << r.err;
}

TEST_F(CliTest, SchemaViolationsAreUsageErrors) {
  auto expect_usage = [&](json j, const std::string& needle) {
    const auto r = run({"solve", problem(j), "--out", path("x")});
    EXPECT_EQ(r.code, 2) << j.dump();
    EXPECT_NE(r.err.find(needle), std::string::npos) << r.err;
  };
  auto j = classical();
  j.erase("schema");
  expect_usage(j, "schema");
  j = classical();
  j["schema"] = 2;
  expect_usage(j, "schema");
  j = classical();
  j["colour"] = 1;
  expect_usage(j, "colour");
  j = classical();
  j["G"] = "v";
  expect_usage(j, "xi");
  j = classical();
  j["F"] = "v^^2";
  expect_usage(j, "offset 2");
  j = classical();
  j["F"] = "v^2 + z";
  expect_usage(j, "\"F\"");
  j = classical();
  j["n"] = 2;
  expect_usage(j, "\"n\"");
  j = classical();
  j["solver"] = {{"max_iter", 3}};
  expect_usage(j, "solver.max_iter");
  j = classical();
  j["yb"] = "auto-reference";
  expect_usage(j, "xi");
  EXPECT_EQ(run({"solve", write("broken.json", "{\"schema\": 1,"), "--out", path("x")}).code, 2);
  EXPECT_EQ(run({"solve", path("missing.json")}).code, 2);
}

TEST_F(CliTest, DomainErrorExitsWithFour) {
  auto j = classical();
  j["F"] = "log(v)";
  j["ya"] = 1;
  j["yb"] = 0;
  const auto r = run({"solve", problem(j), "--out", path("x")});
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.err.find("log"), std::string::npos) << r.err;
}

TEST_F(CliTest, NonConvergenceExitsWithThreeAndStillReports) {
  auto j = classical();
  j["F"] = "v^4 + exp(y*v)";
  j["k"] = 1;
  j["n"] = 101;
  j["solver"] = {{"max_iters", 1}, {"grad_tol", 1e-14}};
  const auto r = run({"solve", problem(j), "--out", path("x")});
  EXPECT_EQ(r.code, 3);
  EXPECT_FALSE(json::parse(r.out)["converged"].get<bool>());
  EXPECT_TRUE(fs::exists(path("x") + ".csv"));
}

TEST_F(CliTest, BracketFailureExitsWithThree) {
  auto j = classical();
  j["n"] = 51;
  j["G"] = "v";
  j["xi"] = 2.0;  // k = 0 forces int v dt = yb - ya = 1
  j["solver"] = {{"lambda_bracket", {-10, 10}}};
  const auto r = run({"solve", problem(j), "--out", path("x")});
  EXPECT_EQ(r.code, 3);
  EXPECT_FALSE(json::parse(r.out)["converged"].get<bool>());
}

TEST_F(CliTest, ResidualOfClassicalLine) {
  std::string csv = "t,y\n";
  std::string bent = "t,y\n";
  for (int i = 0; i < 501; ++i) {
    const double t = i / 500.0;
    csv += std::to_string(t) + "," + std::to_string(t) + "\n";
    bent += std::to_string(t) + "," + std::to_string(t + 0.1 * std::sin(std::numbers::pi * t)) + "\n";
  }
  const auto file = (kData / "classical.json").string();
  const auto r = run({"residual", file, write("line.csv", csv)});
  ASSERT_EQ(r.code, 0) << r.err;
  const double flat = json::parse(r.out)["norm_max_interior"].get<double>();
  EXPECT_LE(flat, 1e-8);
  const auto rb = run({"residual", file, write("bent.csv", bent)});
  ASSERT_EQ(rb.code, 0) << rb.err;
  EXPECT_GT(json::parse(rb.out)["norm_max_interior"].get<double>(), flat);
  EXPECT_GT(json::parse(rb.out)["norm_l2_interior"].get<double>(),
            json::parse(r.out)["norm_l2_interior"].get<double>());
}

TEST_F(CliTest, ResidualRejectsMismatchedInput) {
  const auto file = (kData / "classical.json").string();
  EXPECT_EQ(run({"residual", file, write("short.csv", "t,y\n0,0\n0.5,0.5\n1,1\n")}).code, 2);
  std::string shifted = "t,y\n";
  for (int i = 0; i < 501; ++i) shifted += std::to_string(0.5 + i / 1000.0) + ",0\n";
  EXPECT_EQ(run({"residual", file, write("shift.csv", shifted)}).code, 2);
  EXPECT_EQ(run({"residual", file, write("bad.csv", "x,y\n")}).code, 2);
  const auto iso = (kData / "energy_alpha_half.json").string();
  std::string zeros = "t,y\n";
  for (int i = 0; i < 1001; ++i) zeros += std::to_string(i / 1000.0) + ",0\n";
  const auto r = run({"residual", iso, write("z.csv", zeros)});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("--lambda"), std::string::npos);
}

TEST_F(CliTest, ReferenceExamples) {
  const auto r = run({"reference", "--k", "0", "--alpha", "0.5", "--xi", "1", "--n", "11"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = parse_csv(r.out);
  EXPECT_EQ(csv.header, (std::vector<std::string>{"t", "y"}));
  ASSERT_EQ(csv.rows.size(), 11u);
  for (const auto& row : csv.rows) EXPECT_NEAR(row[1], row[0], 1e-10);
  EXPECT_EQ(last_json_line(r.out)["boundary_value"].get<double>(), 1.0);

  const auto z = run({"reference", "--k", "1", "--alpha", "0.5", "--xi", "0", "--n", "21"});
  ASSERT_EQ(z.code, 0);
  for (const auto& row : parse_csv(z.out).rows) EXPECT_EQ(row[1], 0.0);

  // Oracle-confirmed value of the small-order extremal at t = 1.
  const auto s = run({"reference", "--k", "1", "--alpha", "0.05", "--xi", "1", "--n", "101"});
  ASSERT_EQ(s.code, 0);
  EXPECT_NEAR(last_json_line(s.out)["boundary_value"].get<double>(), 0.6230432, 5e-7);
  EXPECT_NEAR(parse_csv(s.out).rows.back()[1], 0.6230432, 5e-7);
}

TEST_F(CliTest, ReferenceErrors) {
  EXPECT_EQ(run({"reference", "--k", "1", "--alpha", "1.5", "--xi", "1", "--n", "11"}).code, 2);
  EXPECT_EQ(run({"reference", "--k", "1", "--alpha", "0.5", "--xi", "1"}).code, 2);
  EXPECT_EQ(run({"reference", "--k", "40", "--alpha", "0.5", "--xi", "1", "--n", "11"}).code, 4);
}

TEST_F(CliTest, ReferenceRoundTripsThroughResidual) {
  const auto ref = run({"reference", "--k", "1", "--alpha", "0.5", "--xi", "1", "--n", "2001",
                        "--out", path("ref")});
  ASSERT_EQ(ref.code, 0) << ref.err;
  const auto r = run({"residual", (kData / "energy_alpha_half.json").string(), path("ref") + ".csv",
                      "--lambda", "2", "--n", "2001"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_LE(j["norm_max_core"].get<double>(), 5e-2);
  EXPECT_GE(j["norm_max_interior"].get<double>(), j["norm_max_core"].get<double>());
}

TEST_F(CliTest, ConvergenceAgainstReference) {
  const auto r = run({"convergence", (kData / "energy_alpha_half.json").string(), "--grids",
                      "251,501,1001"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["comparison"], "reference");
  ASSERT_EQ(j["rows"].size(), 3u);
  for (std::size_t i = 1; i < 3; ++i) {
    EXPECT_LT(j["rows"][i]["error"].get<double>(), j["rows"][i - 1]["error"].get<double>());
    EXPECT_GT(j["rows"][i]["order"].get<double>(), 0.0);
  }
  EXPECT_TRUE(j["rows"][0]["order"].is_null());
}

TEST_F(CliTest, ConvergenceOfClassicalIsAtRoundingLevel) {
  const auto r = run({"convergence", (kData / "classical.json").string(), "--grids", "101,201,401"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["comparison"], "finest");
  for (const auto& row : j["rows"]) EXPECT_LE(row["error"].get<double>(), 1e-12);
}

TEST_F(CliTest, ConvergenceNeedsTwoGrids) {
  const auto file = (kData / "classical.json").string();
  EXPECT_EQ(run({"convergence", file, "--grids", "101"}).code, 2);
  EXPECT_EQ(run({"convergence", file, "--grids", "101,101"}).code, 2);
}

TEST_F(CliTest, GlobalFlags) {
  const auto file = (kData / "classical.json").string();
  EXPECT_EQ(run({"--seed", "3", "solve", file, "--out", path("x")}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(CliTest, RepeatedRunsAreByteIdentical) {
  const auto file = (kData / "energy_alpha_half.json").string();
  const auto a = run({"solve", file, "--out", path("a"), "--n", "201"});
  const auto b = run({"solve", file, "--out", path("b"), "--n", "201"});
  EXPECT_EQ(a.code, b.code);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(slurp(path("a") + ".csv"), slurp(path("b") + ".csv"));
}

TEST(ProblemFile, ParsesSolverOptions) {
  const auto f = fracvar::cli::parse_problem_file(R"({
    "schema": 1, "a": 0, "b": 2, "alpha": 0.3, "k": 1.5, "F": "v^2", "G": "v", "xi": 0.5,
    "ya": 0, "yb": 1, "n": 11,
    "solver": {"max_iters": 7, "grad_tol": 1e-8, "constraint_tol": 1e-7, "memory": 4,
               "line_search": "backtracking-armijo", "lambda_bracket": [-5, 5]}})");
  EXPECT_EQ(f.b, 2.0);
  EXPECT_EQ(f.solver.max_iters, 7);
  EXPECT_EQ(f.solver.grad_tol, 1e-8);
  EXPECT_EQ(f.solver.constraint_tol, 1e-7);
  EXPECT_EQ(f.solver.memory, 4);
  EXPECT_EQ(f.solver.lambda_bracket.first, -5.0);
  EXPECT_EQ(*f.g, "v");
  EXPECT_EQ(*f.yb, 1.0);
  EXPECT_FALSE(fracvar::cli::is_reference_family(f));
  const auto p = fracvar::cli::build_problem(f, 21);
  EXPECT_EQ(p.grid().size(), 21u);
  EXPECT_TRUE(p.constrained());
}

TEST(ProblemFile, AutoReferenceResolvesBoundaryValue) {
  const auto f = fracvar::cli::load_problem_file(kData / "energy_alpha_half.json");
  EXPECT_FALSE(f.yb.has_value());
  EXPECT_TRUE(fracvar::cli::is_reference_family(f));
  EXPECT_NEAR(fracvar::cli::resolve_yb(f), 0.5559627432513196, 1e-12);
}
