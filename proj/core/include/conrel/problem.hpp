#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "conrel/expr.hpp"

namespace conrel {

struct VariableSpec {
  std::string name;
  double lower = 0.0;
  double upper = 1.0;

  double range() const noexcept { return upper - lower; }
};

enum class ConstraintKind { Inequality, Equality };

std::string_view to_string(ConstraintKind kind);

/// g(x) <= 0 for inequalities, h(x) = 0 for equalities.
struct Constraint {
  std::string name;
  ConstraintKind kind = ConstraintKind::Inequality;
  expr::Expr expr;
};

/// Bounded-variable problem with an optional objective and named constraints.
///
/// Constraint and variable indices are 0-based positions in declaration
/// order. All expressions are bound to variable slots on construction.
class Problem {
 public:
  /// Validates and binds. Throws InputError on empty variable list, duplicate
  /// names, non-finite or inverted bounds, and references to undeclared
  /// variables.
  Problem(std::string name, std::vector<VariableSpec> variables,
          std::vector<Constraint> constraints, std::optional<expr::Expr> objective = std::nullopt);

  const std::string& name() const noexcept { return name_; }
  const std::vector<VariableSpec>& variables() const noexcept { return variables_; }
  const std::vector<std::string>& variable_names() const noexcept { return variable_names_; }
  const std::vector<Constraint>& constraints() const noexcept { return constraints_; }
  const std::optional<expr::Expr>& objective() const noexcept { return objective_; }

  std::size_t dimension() const noexcept { return variables_.size(); }
  std::size_t constraint_count() const noexcept { return constraints_.size(); }

  const Constraint& constraint(std::size_t j) const;
  std::optional<std::size_t> constraint_index(std::string_view name) const;
  std::optional<std::size_t> variable_index(std::string_view name) const;

  /// Index of the named constraint; throws InputError if absent.
  std::size_t require_constraint(std::string_view name) const;

 private:
  std::string name_;
  std::vector<VariableSpec> variables_;
  std::vector<std::string> variable_names_;
  std::vector<Constraint> constraints_;
  std::optional<expr::Expr> objective_;
};

/// Parses the JSON problem document:
///   {"name": str, "variables": [{"name", "lower", "upper"}...],
///    "objective": str (optional),
///    "constraints": [{"name", "kind": "inequality"|"equality", "expr"}...]}
Problem load_problem(std::string_view document);
Problem load_problem_file(const std::string& path);

/// Serializes back to the problem-file format.
std::string problem_to_json(const Problem& problem);

/// Raw unified constraint value: g_j(x) or h_j(x), no absolute value.
/// Throws NumericalError naming the constraint and the point.
double constraint_value(const Problem& problem, std::size_t j, std::span<const double> point);

struct Feasibility {
  std::vector<bool> per_constraint;
  bool all = true;
};

inline constexpr double kDefaultEpsFeas = 1e-6;

/// Inequality j is feasible iff g_j(x) <= eps; equality iff |h_j(x)| <= eps.
Feasibility feasibility(const Problem& problem, std::span<const double> point,
                        double eps_feas = kDefaultEpsFeas);

bool is_feasible(const Problem& problem, std::size_t j, std::span<const double> point,
                 double eps_feas = kDefaultEpsFeas);

// ---------------------------------------------------------------------------
// Sampling

enum class SamplingStrategy { Uniform, LatinHypercube, Grid };

std::string_view to_string(SamplingStrategy s);
/// Accepts "uniform", "lhs" / "latin-hypercube", "grid".
SamplingStrategy sampling_strategy_from_string(std::string_view s);

/// Decision points and the N x m matrix of constraint values at them.
class SampleSet {
 public:
  SampleSet(std::size_t dimension, std::size_t constraint_count, std::vector<double> points,
            std::vector<double> values, std::uint64_t seed, SamplingStrategy strategy);

  std::size_t size() const noexcept { return count_; }
  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t constraint_count() const noexcept { return constraint_count_; }
  std::uint64_t seed() const noexcept { return seed_; }
  SamplingStrategy strategy() const noexcept { return strategy_; }

  std::span<const double> point(std::size_t a) const {
    return {points_.data() + a * dimension_, dimension_};
  }
  double value(std::size_t a, std::size_t j) const { return values_[a * constraint_count_ + j]; }

  /// Values of constraint j at every sample, in sample order.
  std::vector<double> column(std::size_t j) const;

  friend bool operator==(const SampleSet&, const SampleSet&) = default;

 private:
  std::size_t dimension_;
  std::size_t constraint_count_;
  std::size_t count_;
  std::vector<double> points_;
  std::vector<double> values_;
  std::uint64_t seed_;
  SamplingStrategy strategy_;
};

inline constexpr std::size_t kDefaultSampleCount = 200;

/// Draws `count` points inside the bounds and evaluates every constraint.
/// Deterministic in (problem, count, seed, strategy). The grid strategy needs
/// `count` to be a perfect n-th power and includes the bound endpoints.
/// Throws NumericalError when a constraint is non-finite at a sampled point.
SampleSet sample(const Problem& problem, std::size_t count, std::uint64_t seed,
                 SamplingStrategy strategy = SamplingStrategy::LatinHypercube);

/// Evaluates every constraint at caller-supplied points (row-major, N x n).
SampleSet evaluate_points(const Problem& problem, std::vector<double> points, std::uint64_t seed,
                          SamplingStrategy strategy);

}  // namespace conrel
