#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "conrel/analysis.hpp"
#include "conrel/error.hpp"
#include "conrel/generator.hpp"
#include "conrel/graph.hpp"
#include "conrel/plots.hpp"
#include "conrel/report.hpp"

namespace conrel::cli {

namespace {

using json = nlohmann::ordered_json;

struct SamplingFlags {
  std::string problem;
  std::size_t samples = kDefaultSampleCount;
  std::uint64_t seed = 0;
  std::string strategy = "lhs";
  double eps_tie = kDefaultEpsTie;
  double eps_feas = kDefaultEpsFeas;
  std::string gradients = "symbolic";
  double step = kDefaultGradientStep;
  double probe = 0.01;
};

void add_sampling_flags(CLI::App* cmd, SamplingFlags& f) {
  cmd->add_option("problem", f.problem, "Problem file (JSON)")->required();
  cmd->add_option("--samples,-N", f.samples, "Number of sampled points")->capture_default_str();
  cmd->add_option("--seed", f.seed, "Sampling seed")->required();
  cmd->add_option("--strategy", f.strategy, "uniform, lhs or grid")->capture_default_str();
  cmd->add_option("--eps-tie", f.eps_tie, "Tie tolerance for value differences")->capture_default_str();
  cmd->add_option("--eps-feas", f.eps_feas, "Feasibility tolerance")->capture_default_str();
  cmd->add_option("--probe", f.probe, "Perturbation size for effective support, as a fraction of range")
      ->capture_default_str();
}

void add_gradient_flags(CLI::App* cmd, SamplingFlags& f) {
  cmd->add_option("--gradients", f.gradients, "symbolic or fd")->capture_default_str();
  cmd->add_option("--step", f.step, "Central-difference step")->capture_default_str();
}

AnalysisOptions options_from(const SamplingFlags& f) {
  AnalysisOptions o;
  o.samples = f.samples;
  o.seed = f.seed;
  o.strategy = sampling_strategy_from_string(f.strategy);
  o.eps_tie = f.eps_tie;
  o.eps_feas = f.eps_feas;
  o.probe.delta_fraction = f.probe;
  o.gradient_mode = gradient_mode_from_string(f.gradients);
  o.gradient_step = f.step;
  return o;
}

std::string number(std::optional<double> v) {
  if (!v) return "undefined";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", *v);
  return buf;
}

std::string join(const std::vector<std::string>& v, std::string_view sep) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) out += sep;
    out += v[k];
  }
  return out;
}

void print_graph_summary(const AnalysisReport& r, std::ostream& out) {
  for (const auto& e : r.edges) {
    out << e.i << " -- " << e.j << ": " << to_string(e.label);
    if (e.conflict_magnitude && e.label != EdgeLabel::Independent) {
      out << " (conflict " << number(e.conflict_magnitude) << ")";
    }
    out << '\n';
  }
  for (const auto& e : r.inferred) {
    out << e.i << " -- " << e.j << ": " << to_string(e.label) << " [inferred via " << join(e.witness, " > ")
        << "]\n";
  }
  for (const auto& c : r.contradictions) {
    out << "contradiction " << c.i << " -- " << c.j << ": measured " << to_string(c.measured) << ", implied "
        << to_string(c.implied) << " via " << join(c.witness, " > ") << '\n';
  }
  for (const auto& x : r.redundancy) out << "redundant: " << x.redundant << " (implied by " << x.witness << ")\n";
}

json gradient_json(const ReportGradient& g) {
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  return {{"i", g.i},
          {"j", g.j},
          {"mean_harmony", opt(g.aggregate.mean_harmony)},
          {"mean_conflict", opt(g.aggregate.mean_conflict)},
          {"evaluated_points", g.aggregate.evaluated_points},
          {"zero_gradient_points", g.aggregate.zero_gradient_points},
          {"antiparallel_points", g.aggregate.antiparallel_points},
          {"boundary_points", g.aggregate.boundary_points}};
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_text_file(path, text);
  }
}

std::pair<std::string, std::string> split_pair(const std::string& spec) {
  const auto comma = spec.find(',');
  if (comma == std::string::npos || comma == 0 || comma + 1 == spec.size()) {
    throw InputError("--pair: expected NAME,NAME, got '" + spec + "'");
  }
  return {spec.substr(0, comma), spec.substr(comma + 1)};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Constraint relationship analysis", "conrel"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  SamplingFlags analyze_f;
  std::string analyze_out, analyze_csv;
  auto* analyze_cmd = app.add_subcommand("analyze", "Full analysis, writes a JSON report");
  add_sampling_flags(analyze_cmd, analyze_f);
  add_gradient_flags(analyze_cmd, analyze_f);
  analyze_cmd->add_option("--out,-o", analyze_out, "Report path (default: stdout)");
  analyze_cmd->add_option("--csv", analyze_csv, "Relationship matrix CSV path");

  SamplingFlags pair_f;
  std::string pair_i, pair_j, svg_parallel, svg_scatter;
  auto* pair_cmd = app.add_subcommand("pair", "Evidence for one constraint pair");
  add_sampling_flags(pair_cmd, pair_f);
  add_gradient_flags(pair_cmd, pair_f);
  pair_cmd->add_option("-i", pair_i, "First constraint name")->required();
  pair_cmd->add_option("-j", pair_j, "Second constraint name")->required();
  pair_cmd->add_option("--svg-parallel", svg_parallel, "Parallel-coordinates SVG path");
  pair_cmd->add_option("--svg-scatter", svg_scatter, "Scatter SVG path");

  SamplingFlags grad_f;
  std::string grad_out;
  auto* grad_cmd = app.add_subcommand("gradients", "Gradient-angle aggregates for every pair");
  add_sampling_flags(grad_cmd, grad_f);
  add_gradient_flags(grad_cmd, grad_f);
  grad_cmd->add_option("--out,-o", grad_out, "Output path (default: stdout)");

  SamplingFlags dec_f;
  std::string dec_out;
  auto* dec_cmd = app.add_subcommand("decompose", "Split constraints into independent sub-problems");
  add_sampling_flags(dec_cmd, dec_f);
  dec_cmd->add_option("--out,-o", dec_out, "Output path (default: stdout)");

  std::string infer_report, infer_out, infer_csv;
  auto* infer_cmd = app.add_subcommand("infer", "Transitive inference on an existing report");
  infer_cmd->add_option("--report", infer_report, "Report produced by analyze")->required();
  infer_cmd->add_option("--out,-o", infer_out, "Updated report path");
  infer_cmd->add_option("--csv", infer_csv, "Matrix CSV including inferred edges");

  std::string family = "affine", plan_text = "random", gen_out, gen_labels, reference_key = "merged";
  std::size_t gen_n = 0, gen_m = 0;
  std::optional<std::uint64_t> gen_seed;
  auto* gen_cmd = app.add_subcommand("generate", "Write a test problem");
  gen_cmd->add_option("--family", family, "affine or reference")->capture_default_str();
  gen_cmd->add_option("--n", gen_n, "Number of variables (affine)");
  gen_cmd->add_option("--m", gen_m, "Number of constraints (affine)");
  gen_cmd->add_option("--plan", plan_text, "random, TH, TC, IND or a list like 1-2:TH,2-3:TC")
      ->capture_default_str();
  gen_cmd->add_option("--seed", gen_seed, "Generator seed (affine)");
  gen_cmd->add_option("--problem", reference_key, "conflict, harmony, independence or merged (reference family)")
      ->capture_default_str();
  gen_cmd->add_option("--out,-o", gen_out, "Problem path (default: stdout)");
  gen_cmd->add_option("--labels", gen_labels, "Planted-label sidecar path (affine)");

  std::string plot_report, plot_pair, plot_kind, plot_out;
  auto* plot_cmd = app.add_subcommand("plot", "SVG plot of one pair from a report");
  plot_cmd->add_option("--report", plot_report, "Report produced by analyze")->required();
  plot_cmd->add_option("--pair", plot_pair, "NAME,NAME")->required();
  plot_cmd->add_option("--kind", plot_kind, "parallel or scatter")->required();
  plot_cmd->add_option("--out,-o", plot_out, "SVG path")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    if (*analyze_cmd) {
      const Problem problem = load_problem_file(analyze_f.problem);
      const AnalysisReport report = analyze(problem, options_from(analyze_f));
      emit(report_to_json(report), analyze_out, out);
      if (!analyze_csv.empty()) write_text_file(analyze_csv, matrix_csv(graph_from_report(report)));
      if (!analyze_out.empty() && analyze_out != "-") print_graph_summary(report, out);
    } else if (*pair_cmd) {
      const Problem problem = load_problem_file(pair_f.problem);
      const AnalysisOptions o = options_from(pair_f);
      const std::size_t i = problem.require_constraint(pair_i);
      const std::size_t j = problem.require_constraint(pair_j);
      if (i == j) throw InputError("-i and -j name the same constraint");
      const SampleSet samples = draw_samples(problem, o);
      const ReportPair p = pair_record(problem, samples, i, j, o.eps_tie);
      const IndependenceVerdict iv = independence_verdict(problem, i, j, samples, o.probe);
      const GradientAggregate g =
          o.gradient_mode == GradientMode::Symbolic
              ? gradient_relationship(GradientTable(problem), i, j, samples)
              : gradient_relationship(problem, i, j, samples, o.gradient_mode, o.gradient_step);
      out << "pair " << p.i << ", " << p.j << " (N = " << p.samples << ", seed " << p.seed << ", "
          << to_string(o.strategy) << ")\n";
      out << "label: " << to_string(p.label) << '\n';
      out << "sample pairs: " << p.evidence.total_pairs << " total, " << p.evidence.harmony_pairs
          << " harmony, " << p.evidence.conflict_pairs << " conflict, " << p.evidence.tie_pairs << " tied\n";
      out << "harmony magnitude: " << number(p.harmony_magnitude) << '\n';
      out << "conflict magnitude: " << number(p.conflict_magnitude) << '\n';
      out << "crossing count: " << p.crossing_count << '\n';
      out << "syntactic independence: " << (iv.syntactic_independent ? "yes" : "no") << '\n';
      out << "effective independence: " << (iv.effective_independent ? "yes" : "no") << '\n';
      out << "gradient mean harmony: " << number(g.mean_harmony) << '\n';
      out << "gradient mean conflict: " << number(g.mean_conflict) << '\n';
      out << "gradient points: " << g.evaluated_points << " evaluated, " << g.zero_gradient_points
          << " zero, " << g.antiparallel_points << " antiparallel, " << g.boundary_points << " at bounds\n";
      const auto vi = samples.column(i);
      const auto vj = samples.column(j);
      if (!svg_parallel.empty()) write_parallel_coordinates_svg(vi, vj, p.i, p.j, svg_parallel);
      if (!svg_scatter.empty()) write_scatter_svg(vi, vj, p.i, p.j, svg_scatter);
    } else if (*grad_cmd) {
      const Problem problem = load_problem_file(grad_f.problem);
      const AnalysisOptions o = options_from(grad_f);
      const SampleSet samples = draw_samples(problem, o);
      json doc = json::array();
      for (const auto& g : gradient_records(problem, samples, o.gradient_mode, o.gradient_step)) {
        doc.push_back(gradient_json(g));
      }
      emit(doc.dump(2) + "\n", grad_out, out);
    } else if (*dec_cmd) {
      const Problem problem = load_problem_file(dec_f.problem);
      const AnalysisOptions o = options_from(dec_f);
      const SampleSet samples = draw_samples(problem, o);
      std::vector<std::set<std::string>> supports;
      for (std::size_t j = 0; j < problem.constraint_count(); ++j) {
        supports.push_back(effective_support(problem, j, samples, o.probe));
      }
      const Decomposition d = decompose(problem, supports);
      json subs = json::array();
      for (const auto& s : d.subproblems) {
        json c = json::array(), v = json::array();
        for (const auto k : s.constraints) c.push_back(problem.constraint(k).name);
        for (const auto k : s.variables) v.push_back(problem.variables()[k].name);
        subs.push_back({{"constraints", c}, {"variables", v}});
      }
      json unc = json::array();
      for (const auto k : d.unconstrained) unc.push_back(problem.variables()[k].name);
      const json doc = {{"subproblems", subs}, {"unconstrained", unc}};
      emit(doc.dump(2) + "\n", dec_out, out);
    } else if (*infer_cmd) {
      AnalysisReport report = load_report_file(infer_report);
      const RelationshipGraph graph = graph_from_report(report);
      const InferenceResult result = infer_transitive(graph);
      set_inference(report, result);
      if (!infer_out.empty()) write_text_file(infer_out, report_to_json(report));
      if (!infer_csv.empty()) write_text_file(infer_csv, matrix_csv(apply_inference(graph, result)));
      print_graph_summary(report, out);
    } else if (*gen_cmd) {
      if (family == "reference") {
        emit(problem_to_json(paper_problem(reference_key)), gen_out, out);
      } else if (family == "affine") {
        if (!gen_seed) throw InputError("generate --family affine: --seed is required");
        if (gen_cmd->count("--n") == 0 || gen_cmd->count("--m") == 0) {
          throw InputError("generate --family affine: --n and --m are required");
        }
        const PlantedProblem planted = generate_affine(gen_n, gen_m, *gen_seed, AffinePlan::parse(plan_text));
        emit(problem_to_json(planted.problem), gen_out, out);
        if (!gen_labels.empty()) write_text_file(gen_labels, planted_labels_to_json(planted));
      } else {
        throw InputError("--family: expected affine or reference, got '" + family + "'");
      }
    } else if (*plot_cmd) {
      const AnalysisReport report = load_report_file(plot_report);
      const Problem problem = problem_from_report(report);
      const auto [ni, nj] = split_pair(plot_pair);
      const std::size_t i = problem.require_constraint(ni);
      const std::size_t j = problem.require_constraint(nj);
      if (i == j) throw InputError("--pair names the same constraint twice");
      const auto& p = report.parameters;
      const SampleSet samples = sample(problem, p.samples, p.seed, p.strategy);
      const auto vi = samples.column(i);
      const auto vj = samples.column(j);
      if (plot_kind == "parallel") {
        write_parallel_coordinates_svg(vi, vj, ni, nj, plot_out);
      } else if (plot_kind == "scatter") {
        write_scatter_svg(vi, vj, ni, nj, plot_out);
      } else {
        throw InputError("--kind: expected parallel or scatter, got '" + plot_kind + "'");
      }
    }
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return 2;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace conrel::cli
