#include "conrel/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "conrel/error.hpp"
#include "conrel/graph.hpp"

namespace conrel {

namespace {

std::vector<std::string> ordered(const Problem& problem, const std::set<std::string>& names) {
  std::vector<std::string> out(names.begin(), names.end());
  std::sort(out.begin(), out.end(), [&](const std::string& a, const std::string& b) {
    return *problem.variable_index(a) < *problem.variable_index(b);
  });
  return out;
}

std::vector<std::string> names_of(const Problem& problem, const std::vector<std::size_t>& idx,
                                  bool variables) {
  std::vector<std::string> out;
  for (const auto k : idx) {
    out.push_back(variables ? problem.variables()[k].name : problem.constraint(k).name);
  }
  return out;
}

}  // namespace

ReportParameters report_parameters(const AnalysisOptions& options) {
  ReportParameters p;
  p.samples = options.samples;
  p.seed = options.seed;
  p.strategy = options.strategy;
  p.eps_tie = options.eps_tie;
  p.eps_feas = options.eps_feas;
  p.probe_fraction = options.probe.delta_fraction;
  p.eps_value = options.probe.eps_value;
  p.gradient_mode = options.gradient_mode;
  p.gradient_step = options.gradient_step;
  return p;
}

SampleSet draw_samples(const Problem& problem, const AnalysisOptions& options) {
  if (options.samples < 2) throw InputError("pairwise analysis needs \xE2\x89\xA5 2 samples");
  if (!(options.eps_tie >= 0) || !std::isfinite(options.eps_tie)) {
    throw InputError("eps-tie must be a finite non-negative number");
  }
  if (!(options.eps_feas >= 0) || !std::isfinite(options.eps_feas)) {
    throw InputError("eps-feas must be a finite non-negative number");
  }
  if (!(options.gradient_step > 0) || !std::isfinite(options.gradient_step)) {
    throw InputError("gradient step must be a finite positive number");
  }
  return sample(problem, options.samples, options.seed, options.strategy);
}

ReportPair pair_record(const Problem& problem, const SampleSet& samples, std::size_t i, std::size_t j,
                       double eps_tie) {
  const PairVerdict v = analyze_pair(i, j, samples, eps_tie);
  ReportPair r;
  r.i = problem.constraint(i).name;
  r.j = problem.constraint(j).name;
  r.evidence = v.evidence;
  r.label = v.label;
  r.harmony_magnitude = v.harmony_magnitude;
  r.conflict_magnitude = v.conflict_magnitude;
  r.crossing_count = crossing_count(samples.column(i), samples.column(j), eps_tie);
  r.samples = samples.size();
  r.seed = samples.seed();
  return r;
}

std::vector<ReportGradient> gradient_records(const Problem& problem, const SampleSet& samples,
                                             GradientMode mode, double step) {
  const std::size_t m = problem.constraint_count();
  std::vector<ReportGradient> out;
  if (mode == GradientMode::Symbolic) {
    const GradientTable table(problem);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        out.push_back({problem.constraint(i).name, problem.constraint(j).name,
                       gradient_relationship(table, i, j, samples)});
      }
    }
  } else {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        out.push_back({problem.constraint(i).name, problem.constraint(j).name,
                       gradient_relationship(problem, i, j, samples, mode, step)});
      }
    }
  }
  return out;
}

AnalysisReport analyze(const Problem& problem, const AnalysisOptions& options) {
  const SampleSet samples = draw_samples(problem, options);
  const std::size_t m = problem.constraint_count();

  AnalysisReport report;
  report.problem_name = problem.name();
  if (problem.objective()) report.objective = expr::to_string(*problem.objective());
  for (const auto& v : problem.variables()) report.variables.push_back({v.name, v.lower, v.upper});
  report.parameters = report_parameters(options);

  std::vector<std::set<std::string>> supports;
  for (std::size_t j = 0; j < m; ++j) {
    const Constraint& c = problem.constraint(j);
    supports.push_back(effective_support(problem, j, samples, options.probe));
    report.constraints.push_back({c.name, c.kind, expr::to_string(c.expr),
                                  ordered(problem, expr::syntactic_support(c.expr)),
                                  ordered(problem, supports.back())});
  }

  std::vector<PairVerdict> verdicts;
  std::vector<IndependenceVerdict> independence;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      verdicts.push_back(analyze_pair(i, j, samples, options.eps_tie));
      report.pairs.push_back(pair_record(problem, samples, i, j, options.eps_tie));
      independence.push_back(independence_verdict(problem, i, j, supports[i], supports[j]));
      const auto& iv = independence.back();
      report.independence.push_back({problem.constraint(i).name, problem.constraint(j).name,
                                     iv.syntactic_independent, iv.effective_independent});
      if (iv.syntactic_independent != iv.effective_independent) {
        report.notes.push_back("pair (" + problem.constraint(i).name + ", " + problem.constraint(j).name +
                               "): syntactic supports overlap but effective supports are disjoint");
      }
    }
  }

  report.gradients = gradient_records(problem, samples, options.gradient_mode, options.gradient_step);
  for (const auto& g : report.gradients) {
    const auto& a = g.aggregate;
    if (a.zero_gradient_points > 0) {
      report.notes.push_back("pair (" + g.i + ", " + g.j + "): " + std::to_string(a.zero_gradient_points) +
                             " zero-gradient points excluded from gradient means");
    }
    if (a.boundary_points > 0) {
      report.notes.push_back("pair (" + g.i + ", " + g.j + "): " + std::to_string(a.boundary_points) +
                             " points too close to the bounds for central differences");
    }
  }

  const RelationshipGraph graph = build_graph(m, verdicts, independence);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const Edge& e = graph.edge(i, j);
      if (e.label == EdgeLabel::Unknown) continue;
      report.edges.push_back({problem.constraint(i).name, problem.constraint(j).name, e.label, e.provenance,
                              e.pairwise_label, e.harmony_magnitude, e.conflict_magnitude, e.sequence});
    }
  }
  if (graph.count(EdgeLabel::TotalConflict) > 0) {
    report.notes.push_back("TOTAL_CONFLICT also covers pairs with no harmony evidence; tied pairs are excluded");
  }
  const InferenceResult inference = infer_transitive(graph);
  set_inference(report, inference);
  const bool long_paths = std::any_of(inference.inferred.begin(), inference.inferred.end(),
                                      [](const InferredEdge& e) { return e.witness.size() > 3; });
  if (long_paths) {
    report.notes.push_back("some inferred labels follow sign products along paths of more than two edges "
                           "(extension of the two-step composition rules)");
  }
  if (!inference.contradictions.empty()) {
    report.notes.push_back(std::to_string(inference.contradictions.size()) +
                           " contradiction(s): some total labels cannot all hold over the full domain");
  }

  for (const auto& r : detect_redundancy(problem, graph, samples, options.eps_feas)) {
    report.redundancy.push_back({problem.constraint(r.redundant).name, problem.constraint(r.witness).name});
  }

  const Decomposition dec = decompose(problem, supports);
  for (const auto& s : dec.subproblems) {
    report.subproblems.push_back({names_of(problem, s.constraints, false), names_of(problem, s.variables, true)});
  }
  report.unconstrained = names_of(problem, dec.unconstrained, true);
  return report;
}

}  // namespace conrel
