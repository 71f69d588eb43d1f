#include "conrel/problem.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "conrel/error.hpp"

namespace conrel {

using json = nlohmann::ordered_json;

std::string_view to_string(ConstraintKind kind) {
  return kind == ConstraintKind::Inequality ? "inequality" : "equality";
}

Problem::Problem(std::string name, std::vector<VariableSpec> variables,
                 std::vector<Constraint> constraints, std::optional<expr::Expr> objective)
    : name_(std::move(name)), variables_(std::move(variables)) {
  if (variables_.empty()) throw InputError("problem '" + name_ + "' declares no variables");

  std::set<std::string> seen;
  for (const auto& v : variables_) {
    if (v.name.empty()) throw InputError("variable with empty name");
    if (!seen.insert(v.name).second) throw InputError("duplicate variable name '" + v.name + "'");
    if (!std::isfinite(v.lower) || !std::isfinite(v.upper)) {
      throw InputError("variable '" + v.name + "' has non-finite bounds");
    }
    if (!(v.lower < v.upper)) {
      throw InputError("variable '" + v.name + "': lower bound must be below upper bound");
    }
    variable_names_.push_back(v.name);
  }

  seen.clear();
  constraints_.reserve(constraints.size());
  for (auto& c : constraints) {
    if (c.name.empty()) throw InputError("constraint with empty name");
    if (!seen.insert(c.name).second) throw InputError("duplicate constraint name '" + c.name + "'");
    try {
      c.expr = expr::bind(c.expr, variable_names_);
    } catch (const InputError& e) {
      throw InputError("constraint '" + c.name + "': " + e.what());
    }
    constraints_.push_back(std::move(c));
  }

  if (objective) {
    try {
      objective_ = expr::bind(*objective, variable_names_);
    } catch (const InputError& e) {
      throw InputError(std::string("objective: ") + e.what());
    }
  }
}

const Constraint& Problem::constraint(std::size_t j) const {
  if (j >= constraints_.size()) {
    throw InputError("constraint index " + std::to_string(j) + " out of range");
  }
  return constraints_[j];
}

std::optional<std::size_t> Problem::constraint_index(std::string_view name) const {
  for (std::size_t j = 0; j < constraints_.size(); ++j) {
    if (constraints_[j].name == name) return j;
  }
  return std::nullopt;
}

std::optional<std::size_t> Problem::variable_index(std::string_view name) const {
  for (std::size_t k = 0; k < variable_names_.size(); ++k) {
    if (variable_names_[k] == name) return k;
  }
  return std::nullopt;
}

std::size_t Problem::require_constraint(std::string_view name) const {
  const auto j = constraint_index(name);
  if (!j) throw InputError("unknown constraint '" + std::string(name) + "'");
  return *j;
}

// ---------------------------------------------------------------------------
// Problem file

namespace {

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw InputError(where + ": expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw InputError(where + ": missing field '" + key + "'");
  return *it;
}

std::string string_field(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_string()) throw InputError(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

double number_field(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_number()) throw InputError(where + "." + key + ": expected a number");
  return v.get<double>();
}

expr::Expr parse_field(const std::string& text, const std::string& where) {
  try {
    return expr::parse(text);
  } catch (const ParseError& e) {
    throw InputError(where + ": " + e.what());
  }
}

}  // namespace

Problem load_problem(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed problem document: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("problem document must be a JSON object");

  const std::string name = string_field(doc, "name", "problem");

  const json& vars = field(doc, "variables", "problem");
  if (!vars.is_array()) throw InputError("problem.variables: expected an array");
  std::vector<VariableSpec> variables;
  for (std::size_t k = 0; k < vars.size(); ++k) {
    const std::string where = "variables[" + std::to_string(k) + "]";
    variables.push_back({string_field(vars[k], "name", where), number_field(vars[k], "lower", where),
                         number_field(vars[k], "upper", where)});
  }

  std::optional<expr::Expr> objective;
  if (const auto it = doc.find("objective"); it != doc.end() && !it->is_null()) {
    if (!it->is_string()) throw InputError("problem.objective: expected a string");
    objective = parse_field(it->get<std::string>(), "objective");
  }

  const json& cons = field(doc, "constraints", "problem");
  if (!cons.is_array()) throw InputError("problem.constraints: expected an array");
  std::vector<Constraint> constraints;
  for (std::size_t j = 0; j < cons.size(); ++j) {
    const std::string where = "constraints[" + std::to_string(j) + "]";
    const std::string kind = string_field(cons[j], "kind", where);
    ConstraintKind k;
    if (kind == "inequality") {
      k = ConstraintKind::Inequality;
    } else if (kind == "equality") {
      k = ConstraintKind::Equality;
    } else {
      throw InputError(where + ".kind: expected \"inequality\" or \"equality\", got \"" + kind +
                       "\"");
    }
    constraints.push_back({string_field(cons[j], "name", where), k,
                           parse_field(string_field(cons[j], "expr", where), where + ".expr")});
  }

  return Problem(name, std::move(variables), std::move(constraints), std::move(objective));
}

Problem load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open problem file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return load_problem(buf.str());
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string problem_to_json(const Problem& problem) {
  json doc;
  doc["name"] = problem.name();
  json vars = json::array();
  for (const auto& v : problem.variables()) {
    vars.push_back({{"name", v.name}, {"lower", v.lower}, {"upper", v.upper}});
  }
  doc["variables"] = std::move(vars);
  if (problem.objective()) doc["objective"] = expr::to_string(*problem.objective());
  json cons = json::array();
  for (const auto& c : problem.constraints()) {
    cons.push_back({{"name", c.name},
                    {"kind", std::string(to_string(c.kind))},
                    {"expr", expr::to_string(c.expr)}});
  }
  doc["constraints"] = std::move(cons);
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Values and feasibility

namespace {

std::string format_point(std::span<const double> point) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t k = 0; k < point.size(); ++k) {
    if (k) os << ", ";
    os << point[k];
  }
  os << ')';
  return os.str();
}

}  // namespace

double constraint_value(const Problem& problem, std::size_t j, std::span<const double> point) {
  const Constraint& c = problem.constraint(j);
  if (point.size() != problem.dimension()) {
    throw InputError("decision vector has " + std::to_string(point.size()) + " entries, expected " +
                     std::to_string(problem.dimension()));
  }
  try {
    return expr::evaluate(c.expr, point);
  } catch (const NumericalError& e) {
    throw NumericalError("constraint '" + c.name + "' at " + format_point(point) + ": " + e.what());
  }
}

bool is_feasible(const Problem& problem, std::size_t j, std::span<const double> point,
                 double eps_feas) {
  if (!(eps_feas >= 0)) throw InputError("eps_feas must be non-negative");
  const double v = constraint_value(problem, j, point);
  return problem.constraint(j).kind == ConstraintKind::Inequality ? v <= eps_feas
                                                                  : std::abs(v) <= eps_feas;
}

Feasibility feasibility(const Problem& problem, std::span<const double> point, double eps_feas) {
  Feasibility f;
  f.per_constraint.reserve(problem.constraint_count());
  for (std::size_t j = 0; j < problem.constraint_count(); ++j) {
    const bool ok = is_feasible(problem, j, point, eps_feas);
    f.per_constraint.push_back(ok);
    f.all = f.all && ok;
  }
  return f;
}

// ---------------------------------------------------------------------------
// Sampling

std::string_view to_string(SamplingStrategy s) {
  switch (s) {
    case SamplingStrategy::Uniform: return "uniform";
    case SamplingStrategy::LatinHypercube: return "lhs";
    case SamplingStrategy::Grid: return "grid";
  }
  return "?";
}

SamplingStrategy sampling_strategy_from_string(std::string_view s) {
  if (s == "uniform") return SamplingStrategy::Uniform;
  if (s == "lhs" || s == "latin-hypercube") return SamplingStrategy::LatinHypercube;
  if (s == "grid") return SamplingStrategy::Grid;
  throw InputError("unknown sampling strategy '" + std::string(s) + "'");
}

SampleSet::SampleSet(std::size_t dimension, std::size_t constraint_count,
                     std::vector<double> points, std::vector<double> values, std::uint64_t seed,
                     SamplingStrategy strategy)
    : dimension_(dimension),
      constraint_count_(constraint_count),
      count_(dimension ? points.size() / dimension : 0),
      points_(std::move(points)),
      values_(std::move(values)),
      seed_(seed),
      strategy_(strategy) {
  if (dimension_ == 0 || points_.size() % dimension_ != 0) {
    throw InputError("sample points do not form whole decision vectors");
  }
  if (values_.size() != count_ * constraint_count_) {
    throw InputError("sample value matrix has the wrong shape");
  }
}

std::vector<double> SampleSet::column(std::size_t j) const {
  std::vector<double> out(count_);
  for (std::size_t a = 0; a < count_; ++a) out[a] = value(a, j);
  return out;
}

namespace {

// Smallest k with k^n >= count, or nullopt if k^n != count.
std::optional<std::size_t> grid_side(std::size_t count, std::size_t n) {
  auto power = [n](std::size_t k) {
    std::size_t p = 1;
    for (std::size_t d = 0; d < n; ++d) {
      if (p > std::numeric_limits<std::size_t>::max() / std::max<std::size_t>(k, 1)) {
        return std::numeric_limits<std::size_t>::max();
      }
      p *= k;
    }
    return p;
  };
  auto k = static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(count), 1.0 / n)));
  for (std::size_t c = (k > 1 ? k - 1 : 1); c <= k + 1; ++c) {
    if (power(c) == count) return c;
  }
  return std::nullopt;
}

std::vector<double> draw_points(const Problem& problem, std::size_t count, std::uint64_t seed,
                                SamplingStrategy strategy) {
  const std::size_t n = problem.dimension();
  const auto& vars = problem.variables();
  std::vector<double> points(count * n);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  switch (strategy) {
    case SamplingStrategy::Uniform:
      for (std::size_t a = 0; a < count; ++a) {
        for (std::size_t k = 0; k < n; ++k) {
          points[a * n + k] = vars[k].lower + unit(rng) * vars[k].range();
        }
      }
      break;
    case SamplingStrategy::LatinHypercube: {
      std::vector<std::size_t> strata(count);
      for (std::size_t k = 0; k < n; ++k) {
        std::iota(strata.begin(), strata.end(), std::size_t{0});
        std::shuffle(strata.begin(), strata.end(), rng);
        for (std::size_t a = 0; a < count; ++a) {
          const double u = (static_cast<double>(strata[a]) + unit(rng)) / static_cast<double>(count);
          points[a * n + k] = std::min(vars[k].upper, vars[k].lower + u * vars[k].range());
        }
      }
      break;
    }
    case SamplingStrategy::Grid: {
      const auto side = grid_side(count, n);
      if (!side) {
        throw InputError("grid sampling needs a perfect " + std::to_string(n) +
                         "-th power sample count, got " + std::to_string(count));
      }
      for (std::size_t a = 0; a < count; ++a) {
        std::size_t rest = a;
        for (std::size_t k = 0; k < n; ++k) {
          const std::size_t idx = rest % *side;
          rest /= *side;
          double x;
          if (*side == 1) {
            x = vars[k].lower + 0.5 * vars[k].range();
          } else if (idx + 1 == *side) {
            x = vars[k].upper;
          } else {
            x = vars[k].lower + vars[k].range() * static_cast<double>(idx) /
                                    static_cast<double>(*side - 1);
          }
          points[a * n + k] = x;
        }
      }
      break;
    }
  }
  return points;
}

}  // namespace

SampleSet evaluate_points(const Problem& problem, std::vector<double> points, std::uint64_t seed,
                          SamplingStrategy strategy) {
  const std::size_t n = problem.dimension();
  const std::size_t m = problem.constraint_count();
  if (points.size() % n != 0) throw InputError("sample points do not form whole decision vectors");
  const std::size_t count = points.size() / n;
  std::vector<double> values(count * m);
  for (std::size_t a = 0; a < count; ++a) {
    const std::span<const double> x(points.data() + a * n, n);
    for (std::size_t j = 0; j < m; ++j) values[a * m + j] = constraint_value(problem, j, x);
  }
  return SampleSet(n, m, std::move(points), std::move(values), seed, strategy);
}

SampleSet sample(const Problem& problem, std::size_t count, std::uint64_t seed,
                 SamplingStrategy strategy) {
  if (count == 0) throw InputError("sample count must be positive");
  return evaluate_points(problem, draw_points(problem, count, seed, strategy), seed, strategy);
}

}  // namespace conrel
