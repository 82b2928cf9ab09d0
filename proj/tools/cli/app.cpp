#include "app.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <fracvar/error.hpp>
#include <fracvar/reference.hpp>
#include <fracvar/solver.hpp>

#include "problem_file.hpp"

namespace fracvar::cli {
namespace {

using nlohmann::json;

std::string format17(double x) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x,
                                 std::chars_format::general, 17);
  return std::string(buf.data(), end);
}

json optional_number(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

std::filesystem::path csv_path(const std::string& out, const std::filesystem::path& fallback) {
  std::filesystem::path base = out.empty() ? fallback : std::filesystem::path(out);
  base += ".csv";
  return base;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path.string());
  f << content;
  if (!f) throw UsageError("failed writing " + path.string());
}

struct Options {
  bool quiet = false;
  std::optional<long long> seed;
  std::optional<std::size_t> n;
  std::string out;
};

class Diagnostics {
 public:
  Diagnostics(std::ostream& err, const bool& quiet) : err_(err), quiet_(quiet) {}
  template <class... Args>
  void note(const Args&... args) {
    if (quiet_) return;
    err_ << "fracvar: ";
    (err_ << ... << args);
    err_ << '\n';
  }

 private:
  std::ostream& err_;
  const bool& quiet_;
};

Solution solve_any(const Problem& p, const SolverOptions& opts, bool& bracket_failed,
                   std::string& why) {
  bracket_failed = false;
  if (!p.constrained()) return solve_unconstrained(p, opts);
  try {
    return solve_isoperimetric(p, opts);
  } catch (const BracketError& e) {
    bracket_failed = true;
    why = e.what();
    return e.best();
  }
}

json summary(const Solution& s) {
  json j;
  j["objective"] = s.objective;
  j["lambda"] = optional_number(s.lambda);
  j["el_norm"] = s.el_norm;
  j["constraint_residual"] = optional_number(s.constraint_residual);
  j["iterations"] = s.iterations;
  j["inner_iterations"] = s.inner_iterations;
  j["grad_norm"] = s.grad_norm;
  j["converged"] = s.converged;
  return j;
}

int cmd_solve(const std::string& file_path, const Options& o, std::ostream& out,
              Diagnostics& diag) {
  const ProblemFile file = load_problem_file(file_path);
  const Problem p = build_problem(file, o.n);
  bool bracket_failed = false;
  std::string why;
  const Solution s = solve_any(p, file.solver, bracket_failed, why);
  if (bracket_failed) diag.note(why);

  const CombinedDerivative d = combined_derivative(p, s.y);
  const ELResidual r = el_residual(p, s.y, s.lambda);
  std::string csv = "t,y,v,el_residual\n";
  for (std::size_t i = 0; i < s.y.size(); ++i) {
    csv += format17(p.grid().node(i)) + ',' + format17(s.y[i]) + ',' + format17(d.v[i]) + ',' +
           format17(r.values[i]) + '\n';
  }
  const auto path = csv_path(o.out, std::filesystem::path(file_path).stem());
  write_file(path, csv);

  json j = summary(s);
  j["n"] = p.grid().size();
  out << j.dump() << '\n';
  diag.note("n=", p.grid().size(), " converged=", s.converged ? "true" : "false",
            " csv=", path.string());
  return s.converged ? kOk : kNotConverged;
}

std::vector<std::pair<double, double>> read_ty_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::string line;
  if (!std::getline(in, line)) throw UsageError(path + ": empty file");
  if (line.rfind("t,y", 0) != 0) throw UsageError(path + ": header must start with \"t,y\"");
  std::vector<std::pair<double, double>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line.front() == '{') break;  // trailing JSON line of the reference command
    double vals[2];
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (int c = 0; c < 2; ++c) {
      auto [next, ec] = std::from_chars(p, end, vals[c]);
      if (ec != std::errc() || (c == 0 && (next == end || *next != ','))) {
        throw UsageError(path + ":" + std::to_string(lineno) + ": malformed row");
      }
      p = next + 1;
    }
    rows.emplace_back(vals[0], vals[1]);
  }
  return rows;
}

int cmd_residual(const std::string& file_path, const std::string& y_csv,
                 const std::optional<double>& lambda, const Options& o, std::ostream& out) {
  const ProblemFile file = load_problem_file(file_path);
  const auto rows = read_ty_csv(y_csv);
  const Problem p = build_problem(file, o.n);
  if (p.constrained() && !lambda) throw UsageError("--lambda is required when \"G\" is present");
  if (!p.constrained() && lambda) throw UsageError("--lambda given but the problem has no \"G\"");
  const Grid& grid = p.grid();
  if (rows.size() != grid.size()) {
    throw GridMismatchError(y_csv + ": " + std::to_string(rows.size()) +
                            " rows for a grid of " + std::to_string(grid.size()) + " nodes");
  }
  std::vector<double> y(rows.size());
  const double tol = 1e-9 * (grid.b() - grid.a());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (std::abs(rows[i].first - grid.node(i)) > tol) {
      throw GridMismatchError(y_csv + ": t at row " + std::to_string(i) + " is " +
                              format17(rows[i].first) + ", grid node is " +
                              format17(grid.node(i)));
    }
    y[i] = rows[i].second;
  }
  const ELResidual r = el_residual(p, SampledFunction(grid, std::move(y)), lambda);
  const double span = grid.b() - grid.a();
  json j;
  j["norm_max_interior"] = r.norm_max_interior;
  j["norm_l2_interior"] = r.norm_l2_interior;
  j["norm_max_core"] =
      window_max_norm(r.values, grid.a() + 0.1 * span, grid.b() - 0.1 * span);
  out << j.dump() << '\n';
  return kOk;
}

int cmd_reference(double k, double alpha, double xi, std::size_t n, double b, const Options& o,
                  std::ostream& out) {
  const ReferenceSpec spec{k, FracOrder(alpha), xi, Grid(0.0, b, n)};
  const SampledFunction y = ml_convolution_extremal(spec);
  std::string csv = "t,y\n";
  for (std::size_t i = 0; i < y.size(); ++i) {
    csv += format17(spec.grid.node(i)) + ',' + format17(y[i]) + '\n';
  }
  if (o.out.empty()) {
    out << csv;
  } else {
    write_file(csv_path(o.out, {}), csv);
  }
  json j;
  j["boundary_value"] = boundary_value(spec);
  out << j.dump() << '\n';
  return kOk;
}

double interpolate(const SampledFunction& f, double t) {
  const Grid& g = f.grid();
  const double s = (t - g.a()) / g.spacing();
  const auto i = static_cast<std::size_t>(
      std::clamp(std::floor(s), 0.0, static_cast<double>(g.size() - 2)));
  const double w = s - static_cast<double>(i);
  return (1.0 - w) * f[i] + w * f[i + 1];
}

int cmd_convergence(const std::string& file_path, std::vector<std::size_t> grids,
                    std::ostream& out, Diagnostics& diag) {
  std::sort(grids.begin(), grids.end());
  grids.erase(std::unique(grids.begin(), grids.end()), grids.end());
  if (grids.size() < 2) throw UsageError("--grids needs at least two distinct sizes");
  const ProblemFile file = load_problem_file(file_path);
  const bool vs_reference = is_reference_family(file);

  std::vector<Solution> sols;
  std::vector<Problem> problems;
  bool all_converged = true;
  for (const std::size_t n : grids) {
    problems.push_back(build_problem(file, n));
    bool bracket_failed = false;
    std::string why;
    sols.push_back(solve_any(problems.back(), file.solver, bracket_failed, why));
    if (bracket_failed) diag.note("n=", n, ": ", why);
    all_converged = all_converged && sols.back().converged;
    diag.note("n=", n, " converged=", sols.back().converged ? "true" : "false");
  }

  const std::size_t rows = vs_reference ? grids.size() : grids.size() - 1;
  json table = json::array();
  std::optional<std::pair<double, double>> prev;  // (h, error)
  for (std::size_t r = 0; r < rows; ++r) {
    const SampledFunction& y = sols[r].y;
    const Grid& g = y.grid();
    double e = 0.0;
    if (vs_reference) {
      const SampledFunction ref =
          ml_convolution_extremal({file.k, FracOrder(file.alpha), *file.xi, g});
      for (std::size_t i = 0; i < g.size(); ++i) e = std::max(e, std::abs(y[i] - ref[i]));
    } else {
      const SampledFunction& fine = sols.back().y;
      for (std::size_t i = 0; i < g.size(); ++i) {
        e = std::max(e, std::abs(y[i] - interpolate(fine, g.node(i))));
      }
    }
    json row;
    row["n"] = grids[r];
    row["h"] = g.spacing();
    row["error"] = e;
    row["converged"] = sols[r].converged;
    row["lambda"] = optional_number(sols[r].lambda);
    if (prev && prev->second > 0.0 && e > 0.0) {
      row["order"] = std::log(prev->second / e) / std::log(prev->first / g.spacing());
    } else {
      row["order"] = nullptr;
    }
    prev = std::make_pair(g.spacing(), e);
    table.push_back(row);
  }
  json j;
  j["comparison"] = vs_reference ? "reference" : "finest";
  j["rows"] = table;
  out << j.dump() << '\n';
  return all_converged ? kOk : kNotConverged;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Direct-method solver for variational problems with a combined fractional "
               "derivative",
               "fracvar"};
  app.require_subcommand(1);
  Options o;
  app.add_flag("--quiet", o.quiet, "Suppress diagnostics on stderr");
  app.add_option("--seed", o.seed, "Rejected: all computations are deterministic");

  std::string file_path;
  std::string y_csv;
  std::optional<double> lambda;
  std::size_t n_opt = 0;

  auto* solve = app.add_subcommand("solve", "Solve the problem in a JSON file");
  solve->add_option("file", file_path, "Problem file")->required();
  solve->add_option("--out", o.out, "CSV output path without the .csv suffix");
  solve->add_option("--n", n_opt, "Override the number of grid nodes");
  solve->fallthrough();

  auto* residual = app.add_subcommand("residual", "Euler-Lagrange residual of a trajectory");
  residual->add_option("file", file_path, "Problem file")->required();
  residual->add_option("y_csv", y_csv, "CSV with columns t,y")->required();
  residual->add_option("--lambda", lambda, "Multiplier for constrained problems");
  residual->add_option("--n", n_opt, "Override the number of grid nodes");
  residual->fallthrough();

  double k = 0.0;
  double alpha = 0.5;
  double xi = 1.0;
  double b = 1.0;
  auto* reference = app.add_subcommand("reference", "Sample the reference extremal on [0, b]");
  reference->add_option("--k", k, "Mixing constant")->required();
  reference->add_option("--alpha", alpha, "Fractional order in (0,1)")->required();
  reference->add_option("--xi", xi, "Constraint value")->required();
  reference->add_option("--n", n_opt, "Number of grid nodes")->required();
  reference->add_option("--b", b, "Right endpoint")->capture_default_str();
  reference->add_option("--out", o.out, "CSV output path without the .csv suffix");
  reference->fallthrough();

  std::vector<std::size_t> grids;
  auto* convergence = app.add_subcommand("convergence", "Grid refinement study");
  convergence->add_option("file", file_path, "Problem file")->required();
  convergence->add_option("--grids", grids, "Comma-separated grid sizes")
      ->required()
      ->delimiter(',');
  convergence->fallthrough();

  Diagnostics diag(err, o.quiet);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (o.seed) throw UsageError("--seed is not supported: nothing in fracvar is stochastic");
    if (n_opt != 0) o.n = n_opt;
    if (solve->parsed()) return cmd_solve(file_path, o, out, diag);
    if (residual->parsed()) return cmd_residual(file_path, y_csv, lambda, o, out);
    if (reference->parsed()) {
      if (!(alpha > 0.0 && alpha < 1.0)) {
        throw UsageError("--alpha must lie in the open interval (0,1)");
      }
      return cmd_reference(k, alpha, xi, n_opt, b, o, out);
    }
    if (convergence->parsed()) return cmd_convergence(file_path, grids, out, diag);
    throw UsageError("no subcommand");
  } catch (const UsageError& e) {
    err << "fracvar: error: " << e.what() << '\n';
    return kUsage;
  } catch (const fracvar::ParseError& e) {
    err << "fracvar: error: " << e.what() << " (offset " << e.offset() << ")\n";
    return kUsage;
  } catch (const InvalidArgument& e) {
    err << "fracvar: error: " << e.what() << '\n';
    return kUsage;
  } catch (const GridMismatchError& e) {
    err << "fracvar: error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << "fracvar: numeric error: " << e.what() << '\n';
    return kNumeric;
  } catch (const NonConvergenceError& e) {
    err << "fracvar: numeric error: " << e.what() << '\n';
    return kNumeric;
  } catch (const std::exception& e) {
    err << "fracvar: error: " << e.what() << '\n';
    return kNumeric;
  }
}

}  // namespace fracvar::cli
