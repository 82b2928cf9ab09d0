#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <fracvar/solver.hpp>
#include <fracvar/variational.hpp>

namespace fracvar::cli {

/// Bad input: malformed JSON, schema violation, unreadable file. Exit 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parsed problem file (schema 1).
struct ProblemFile {
  double a = 0.0;
  double b = 1.0;
  double alpha = 0.5;
  double k = 0.0;
  std::string f;
  std::optional<std::string> g;
  std::optional<double> xi;
  double ya = 0.0;
  /// Absent means "auto-reference".
  std::optional<double> yb;
  std::size_t n = 0;
  SolverOptions solver;
};

ProblemFile parse_problem_file(std::string_view json_text);
ProblemFile load_problem_file(const std::filesystem::path& path);

/// yb, resolving "auto-reference" through the reference extremal.
double resolve_yb(const ProblemFile& file);

/// Builds the problem on a grid of `n` nodes (file.n when absent).
Problem build_problem(const ProblemFile& file, std::optional<std::size_t> n = std::nullopt);

/// True for F = v^2, G = v on [0, b] with the right boundary value taken
/// from (or equal to) the reference extremal.
bool is_reference_family(const ProblemFile& file);

}  // namespace fracvar::cli
