#include "problem_file.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include <fracvar/lagrangian.hpp>
#include <fracvar/reference.hpp>

namespace fracvar::cli {
namespace {

using nlohmann::json;

const std::set<std::string> kTopKeys = {"schema", "a",  "b",  "alpha", "k", "F",
                                        "G",      "xi", "ya", "yb",    "n", "solver"};
const std::set<std::string> kSolverKeys = {"max_iters", "grad_tol",     "constraint_tol",
                                           "line_search", "memory", "lambda_bracket"};

double number(const json& doc, const std::string& key) {
  if (!doc.contains(key)) throw UsageError("missing required key \"" + key + "\"");
  const json& v = doc.at(key);
  if (!v.is_number()) throw UsageError("key \"" + key + "\" must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw UsageError("key \"" + key + "\" must be finite");
  return x;
}

std::string text(const json& doc, const std::string& key) {
  if (!doc.contains(key)) throw UsageError("missing required key \"" + key + "\"");
  if (!doc.at(key).is_string()) throw UsageError("key \"" + key + "\" must be a string");
  return doc.at(key).get<std::string>();
}

long long integer(const json& doc, const std::string& key) {
  const json& v = doc.at(key);
  if (!v.is_number_integer()) throw UsageError("key \"" + key + "\" must be an integer");
  return v.get<long long>();
}

/// Parses an expression now so errors name the key and the offset.
void check_expression(const std::string& key, const std::string& source) {
  try {
    (void)Lagrangian::parse(source);
  } catch (const ParseError& e) {
    throw UsageError("key \"" + key + "\": " + e.what() + " (offset " +
                     std::to_string(e.offset()) + ")");
  }
}

SolverOptions parse_solver(const json& doc) {
  if (!doc.is_object()) throw UsageError("key \"solver\" must be an object");
  for (const auto& [key, value] : doc.items()) {
    if (!kSolverKeys.contains(key)) throw UsageError("unknown key \"solver." + key + "\"");
  }
  SolverOptions opts;
  if (doc.contains("max_iters")) opts.max_iters = static_cast<int>(integer(doc, "max_iters"));
  if (doc.contains("grad_tol")) opts.grad_tol = number(doc, "grad_tol");
  if (doc.contains("constraint_tol")) opts.constraint_tol = number(doc, "constraint_tol");
  if (doc.contains("memory")) opts.memory = static_cast<int>(integer(doc, "memory"));
  if (doc.contains("line_search") && text(doc, "line_search") != "backtracking-armijo") {
    throw UsageError("key \"solver.line_search\" must be \"backtracking-armijo\"");
  }
  if (doc.contains("lambda_bracket")) {
    const json& br = doc.at("lambda_bracket");
    if (!br.is_array() || br.size() != 2 || !br[0].is_number() || !br[1].is_number()) {
      throw UsageError("key \"solver.lambda_bracket\" must be an array of two numbers");
    }
    opts.lambda_bracket = {br[0].get<double>(), br[1].get<double>()};
  }
  try {
    opts.validate();
  } catch (const InvalidArgument& e) {
    throw UsageError(std::string("key \"solver\": ") + e.what());
  }
  return opts;
}

}  // namespace

ProblemFile parse_problem_file(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw UsageError("problem file must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!kTopKeys.contains(key)) throw UsageError("unknown key \"" + key + "\"");
  }
  if (!doc.contains("schema")) throw UsageError("missing required key \"schema\"");
  if (!doc.at("schema").is_number_integer() || doc.at("schema").get<long long>() != 1) {
    throw UsageError("key \"schema\" must be 1");
  }

  ProblemFile p;
  p.a = number(doc, "a");
  p.b = number(doc, "b");
  if (!(p.a < p.b)) throw UsageError("keys \"a\", \"b\" must satisfy a < b");
  p.alpha = number(doc, "alpha");
  if (!(p.alpha > 0.0 && p.alpha < 1.0)) {
    throw UsageError("key \"alpha\" must lie in the open interval (0,1), got " +
                     doc.at("alpha").dump());
  }
  p.k = number(doc, "k");
  p.f = text(doc, "F");
  check_expression("F", p.f);

  if (doc.contains("G") != doc.contains("xi")) {
    throw UsageError("keys \"G\" and \"xi\" must appear together");
  }
  if (doc.contains("G")) {
    p.g = text(doc, "G");
    check_expression("G", *p.g);
    p.xi = number(doc, "xi");
  }

  p.ya = number(doc, "ya");
  if (!doc.contains("yb")) throw UsageError("missing required key \"yb\"");
  if (doc.at("yb").is_string()) {
    if (doc.at("yb").get<std::string>() != "auto-reference") {
      throw UsageError("key \"yb\" must be a number or \"auto-reference\"");
    }
    if (!p.xi) throw UsageError("\"yb\": \"auto-reference\" requires \"xi\"");
    if (p.a != 0.0) throw UsageError("\"yb\": \"auto-reference\" requires a = 0");
  } else {
    p.yb = number(doc, "yb");
  }

  if (!doc.contains("n")) throw UsageError("missing required key \"n\"");
  const long long n = integer(doc, "n");
  if (n < 3) throw UsageError("key \"n\" must be at least 3");
  p.n = static_cast<std::size_t>(n);

  if (doc.contains("solver")) p.solver = parse_solver(doc.at("solver"));
  return p;
}

ProblemFile load_problem_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read problem file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_problem_file(buf.str());
  } catch (const UsageError& e) {
    throw UsageError(path.string() + ": " + e.what());
  }
}

double resolve_yb(const ProblemFile& file) {
  if (file.yb) return *file.yb;
  return reference_value(file.k, FracOrder(file.alpha), *file.xi, file.b);
}

Problem build_problem(const ProblemFile& file, std::optional<std::size_t> n) {
  const Grid grid(file.a, file.b, n.value_or(file.n));
  std::optional<Constraint> constraint;
  if (file.g) constraint = Constraint{Lagrangian::parse(*file.g), *file.xi};
  return Problem(Lagrangian::parse(file.f), file.k, FracOrder(file.alpha), grid, file.ya,
                 resolve_yb(file), std::move(constraint));
}

bool is_reference_family(const ProblemFile& file) {
  if (!file.g || file.a != 0.0 || file.ya != 0.0) return false;
  if (Lagrangian::parse(file.f).canonical_text() != "v^2") return false;
  if (Lagrangian::parse(*file.g).canonical_text() != "v") return false;
  if (!file.yb) return true;
  const double ref = reference_value(file.k, FracOrder(file.alpha), *file.xi, file.b);
  return std::abs(*file.yb - ref) <= 1e-8 * std::max(1.0, std::abs(ref));
}

}  // namespace fracvar::cli
