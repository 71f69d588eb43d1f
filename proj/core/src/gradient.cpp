#include "conrel/gradient.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "conrel/error.hpp"

namespace conrel {

std::string_view to_string(GradientMode mode) {
  return mode == GradientMode::Symbolic ? "symbolic" : "fd";
}

GradientMode gradient_mode_from_string(std::string_view s) {
  if (s == "symbolic") return GradientMode::Symbolic;
  if (s == "fd" || s == "central-difference") return GradientMode::CentralDifference;
  throw InputError("unknown gradient mode '" + std::string(s) + "'");
}

GradientTable::GradientTable(const Problem& problem) : problem_(&problem) {
  partials_.reserve(problem.constraint_count());
  for (const auto& c : problem.constraints()) {
    std::vector<expr::Expr> row;
    row.reserve(problem.dimension());
    for (const auto& v : problem.variable_names()) row.push_back(expr::differentiate(c.expr, v));
    partials_.push_back(std::move(row));
  }
}

std::vector<double> GradientTable::evaluate(std::size_t j, std::span<const double> point) const {
  const auto& row = partials_.at(j);
  std::vector<double> g(row.size());
  for (std::size_t k = 0; k < row.size(); ++k) {
    try {
      g[k] = expr::evaluate(row[k], point);
    } catch (const NumericalError& e) {
      throw NumericalError("derivative of constraint '" + problem_->constraint(j).name +
                           "' w.r.t. '" + problem_->variable_names()[k] + "': " + e.what());
    }
  }
  return g;
}

namespace {

std::vector<double> central_difference(const Problem& problem, std::size_t j,
                                       std::span<const double> point, double step) {
  if (!(step > 0)) throw InputError("finite-difference step must be positive");
  const auto& vars = problem.variables();
  std::vector<double> x(point.begin(), point.end());
  std::vector<double> g(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] - step < vars[k].lower || x[k] + step > vars[k].upper) {
      throw InputError("point too close to the bounds of '" + vars[k].name +
                       "' for a central-difference stencil");
    }
    const double xk = x[k];
    x[k] = xk + step;
    const double fp = constraint_value(problem, j, x);
    x[k] = xk - step;
    const double fm = constraint_value(problem, j, x);
    x[k] = xk;
    g[k] = (fp - fm) / (2.0 * step);
  }
  return g;
}

bool stencil_fits(const Problem& problem, std::span<const double> x, double step) {
  const auto& vars = problem.variables();
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] - step < vars[k].lower || x[k] + step > vars[k].upper) return false;
  }
  return true;
}

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

std::vector<double> gradient(const Problem& problem, std::size_t j, std::span<const double> point,
                             GradientMode mode, double step) {
  if (point.size() != problem.dimension()) throw InputError("decision vector has wrong dimension");
  if (mode == GradientMode::CentralDifference) return central_difference(problem, j, point, step);
  const Constraint& c = problem.constraint(j);
  std::vector<double> g(problem.dimension());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const expr::Expr d = expr::differentiate(c.expr, problem.variable_names()[k]);
    try {
      g[k] = expr::evaluate(d, point);
    } catch (const NumericalError& e) {
      throw NumericalError("derivative of constraint '" + c.name + "' w.r.t. '" +
                           problem.variable_names()[k] + "': " + e.what());
    }
  }
  return g;
}

GradientDecomposition angle_decomposition(std::span<const double> gi, std::span<const double> gj) {
  if (gi.size() != gj.size()) throw InputError("gradient vectors differ in dimension");
  GradientDecomposition d;
  const double ni = norm(gi);
  const double nj = norm(gj);
  if (ni < kZeroNorm || nj < kZeroNorm) {
    d.degenerate = true;
    d.zero_gradient = true;
    d.angle = std::numeric_limits<double>::quiet_NaN();
    return d;
  }
  double sum_sq = 0.0;
  double diff_sq = 0.0;
  for (std::size_t k = 0; k < gi.size(); ++k) {
    const double u = gi[k] / ni;
    const double v = gj[k] / nj;
    sum_sq += (u + v) * (u + v);
    diff_sq += (u - v) * (u - v);
  }
  const double sum_norm = std::sqrt(sum_sq);
  if (sum_norm < kZeroNorm) {
    d.degenerate = true;
    d.angle = std::numbers::pi;
    d.harmony_magnitude = 0.0;
    d.conflict_magnitude = 1.0;
    return d;
  }
  // |u + v| = 2 cos(theta/2), |u - v| = 2 sin(theta/2)
  d.angle = 2.0 * std::atan2(std::sqrt(diff_sq), sum_norm);
  d.harmony_magnitude = std::cos(d.angle / 2.0);
  d.conflict_magnitude = std::sin(d.angle / 2.0);
  return d;
}

namespace {

GradientAggregate aggregate(const Problem& problem, std::size_t i, std::size_t j,
                            const SampleSet& samples, GradientMode mode, double step,
                            const GradientTable* table) {
  if (i == j) throw InputError("gradient analysis needs two distinct constraints");
  problem.constraint(i);
  problem.constraint(j);

  GradientAggregate agg;
  double harmony_sum = 0.0;
  double conflict_sum = 0.0;
  std::size_t used = 0;

  for (std::size_t a = 0; a < samples.size(); ++a) {
    const auto x = samples.point(a);
    if (!table && !stencil_fits(problem, x, step)) {
      ++agg.boundary_points;
      continue;
    }
    const auto gi = table ? table->evaluate(i, x) : gradient(problem, i, x, mode, step);
    const auto gj = table ? table->evaluate(j, x) : gradient(problem, j, x, mode, step);
    const auto d = angle_decomposition(gi, gj);
    ++agg.evaluated_points;
    if (d.zero_gradient) {
      ++agg.zero_gradient_points;
      continue;
    }
    if (d.degenerate) ++agg.antiparallel_points;
    harmony_sum += *d.harmony_magnitude;
    conflict_sum += *d.conflict_magnitude;
    ++used;
  }
  if (used > 0) {
    agg.mean_harmony = harmony_sum / static_cast<double>(used);
    agg.mean_conflict = conflict_sum / static_cast<double>(used);
  }
  return agg;
}

}  // namespace

GradientAggregate gradient_relationship(const Problem& problem, std::size_t i, std::size_t j,
                                        const SampleSet& samples, GradientMode mode,
                                        double step) {
  if (mode == GradientMode::Symbolic) {
    const GradientTable table(problem);
    return aggregate(problem, i, j, samples, mode, step, &table);
  }
  return aggregate(problem, i, j, samples, mode, step, nullptr);
}

GradientAggregate gradient_relationship(const GradientTable& table, std::size_t i, std::size_t j,
                                        const SampleSet& samples) {
  return aggregate(table.problem(), i, j, samples, GradientMode::Symbolic, kDefaultGradientStep,
                   &table);
}

}  // namespace conrel
