#include "conrel/independence.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "conrel/error.hpp"

namespace conrel {

bool disjoint(const std::set<std::string>& a, const std::set<std::string>& b) {
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      return false;
    }
  }
  return true;
}

std::set<std::string> effective_support(const Problem& problem, std::size_t j,
                                        const SampleSet& samples, const ProbeOptions& options) {
  if (!(options.delta_fraction > 0)) throw InputError("probe delta must be positive");
  if (!(options.eps_value >= 0)) throw InputError("probe tolerance must be non-negative");
  if (samples.size() == 0) throw InputError("effective support needs at least one sample");
  const Constraint& c = problem.constraint(j);
  const auto& vars = problem.variables();

  std::set<std::string> support;
  std::vector<double> x(problem.dimension());
  for (const auto& name : expr::syntactic_support(c.expr)) {
    const std::size_t k = *problem.variable_index(name);
    const double delta = options.delta_fraction * vars[k].range();
    bool found = false;
    for (std::size_t a = 0; a < samples.size() && !found; ++a) {
      const auto p = samples.point(a);
      std::copy(p.begin(), p.end(), x.begin());
      const double base = constraint_value(problem, j, x);
      for (const double step : {delta, -delta}) {
        x[k] = std::clamp(p[k] + step, vars[k].lower, vars[k].upper);
        const double moved = constraint_value(problem, j, x);
        if (std::abs(moved - base) > options.eps_value) {
          found = true;
          break;
        }
      }
    }
    if (found) support.insert(name);
  }
  return support;
}

IndependenceVerdict independence_verdict(const Problem& problem, std::size_t i, std::size_t j,
                                         const std::set<std::string>& effective_i,
                                         const std::set<std::string>& effective_j) {
  if (i == j) throw InputError("independence verdict needs two distinct constraints");
  IndependenceVerdict v;
  v.i = i;
  v.j = j;
  v.syntactic_independent = disjoint(expr::syntactic_support(problem.constraint(i).expr),
                                     expr::syntactic_support(problem.constraint(j).expr));
  v.effective_independent = disjoint(effective_i, effective_j);
  v.effective_support_i = effective_i;
  v.effective_support_j = effective_j;
  return v;
}

IndependenceVerdict independence_verdict(const Problem& problem, std::size_t i, std::size_t j,
                                         const SampleSet& samples, const ProbeOptions& options) {
  if (i == j) throw InputError("independence verdict needs two distinct constraints");
  return independence_verdict(problem, i, j, effective_support(problem, i, samples, options),
                              effective_support(problem, j, samples, options));
}

}  // namespace conrel
