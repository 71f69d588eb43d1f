#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "conrel/gradient.hpp"
#include "conrel/graph.hpp"
#include "conrel/pairwise.hpp"
#include "conrel/problem.hpp"

namespace conrel {

inline constexpr std::string_view kToolName = "conrel";
inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

// Report records refer to constraints and variables by name so that a report
// stays readable on its own.

struct ReportParameters {
  std::size_t samples = kDefaultSampleCount;
  std::uint64_t seed = 0;
  SamplingStrategy strategy = SamplingStrategy::LatinHypercube;
  double eps_tie = kDefaultEpsTie;
  double eps_feas = kDefaultEpsFeas;
  double probe_fraction = 0.01;
  double eps_value = 1e-9;
  GradientMode gradient_mode = GradientMode::Symbolic;
  double gradient_step = kDefaultGradientStep;

  friend bool operator==(const ReportParameters&, const ReportParameters&) = default;
};

struct ReportVariable {
  std::string name;
  double lower = 0.0;
  double upper = 0.0;

  friend bool operator==(const ReportVariable&, const ReportVariable&) = default;
};

struct ReportConstraint {
  std::string name;
  ConstraintKind kind = ConstraintKind::Inequality;
  std::string expr;
  std::vector<std::string> syntactic_support;
  std::vector<std::string> effective_support;

  friend bool operator==(const ReportConstraint&, const ReportConstraint&) = default;
};

struct ReportPair {
  std::string i;
  std::string j;
  PairEvidence evidence;
  PairLabel label = PairLabel::Degenerate;
  std::optional<double> harmony_magnitude;
  std::optional<double> conflict_magnitude;
  std::uint64_t crossing_count = 0;
  /// Sample size and seed behind the label.
  std::size_t samples = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const ReportPair&, const ReportPair&) = default;
};

struct ReportIndependence {
  std::string i;
  std::string j;
  bool syntactic_independent = false;
  bool effective_independent = false;

  friend bool operator==(const ReportIndependence&, const ReportIndependence&) = default;
};

struct ReportGradient {
  std::string i;
  std::string j;
  GradientAggregate aggregate;

  friend bool operator==(const ReportGradient&, const ReportGradient&) = default;
};

struct ReportEdge {
  std::string i;
  std::string j;
  EdgeLabel label = EdgeLabel::Unknown;
  Provenance provenance = Provenance::Measured;
  std::optional<PairLabel> pairwise_label;
  std::optional<double> harmony_magnitude;
  std::optional<double> conflict_magnitude;
  std::size_t sequence = 0;

  friend bool operator==(const ReportEdge&, const ReportEdge&) = default;
};

struct ReportInferred {
  std::string i;
  std::string j;
  EdgeLabel label = EdgeLabel::Unknown;
  std::vector<std::string> witness;

  friend bool operator==(const ReportInferred&, const ReportInferred&) = default;
};

struct ReportContradiction {
  std::string i;
  std::string j;
  EdgeLabel measured = EdgeLabel::Unknown;
  EdgeLabel implied = EdgeLabel::Unknown;
  std::vector<std::string> witness;

  friend bool operator==(const ReportContradiction&, const ReportContradiction&) = default;
};

struct ReportRedundancy {
  std::string redundant;
  std::string witness;

  friend bool operator==(const ReportRedundancy&, const ReportRedundancy&) = default;
};

struct ReportSubproblem {
  std::vector<std::string> constraints;
  std::vector<std::string> variables;

  friend bool operator==(const ReportSubproblem&, const ReportSubproblem&) = default;
};

/// Everything one `analyze` run produces.
///
/// JSON layout (keys in this order):
///   schema_version, tool{name, version}, problem{name, objective?,
///   variables[], constraints[]}, parameters{}, pairs[], independence[],
///   gradients[], graph{edges[], inferred[], contradictions[]},
///   redundancy[], decomposition{subproblems[], unconstrained[]}, notes[]
/// Undefined magnitudes are null. Reals are written with 17 significant
/// digits.
struct AnalysisReport {
  int schema_version = kReportSchemaVersion;
  std::string tool_version{kToolVersion};

  std::string problem_name;
  std::optional<std::string> objective;
  std::vector<ReportVariable> variables;
  std::vector<ReportConstraint> constraints;

  ReportParameters parameters;

  std::vector<ReportPair> pairs;
  std::vector<ReportIndependence> independence;
  std::vector<ReportGradient> gradients;

  /// Measured edges, pair order. UNKNOWN pairs are omitted.
  std::vector<ReportEdge> edges;
  std::vector<ReportInferred> inferred;
  std::vector<ReportContradiction> contradictions;

  std::vector<ReportRedundancy> redundancy;
  std::vector<ReportSubproblem> subproblems;
  std::vector<std::string> unconstrained;

  std::vector<std::string> notes;

  friend bool operator==(const AnalysisReport&, const AnalysisReport&) = default;
};

std::string report_to_json(const AnalysisReport& report);
/// Throws InputError for malformed documents or unsupported schema versions.
AnalysisReport report_from_json(std::string_view document);

AnalysisReport load_report_file(const std::string& path);

/// Rebuilds the analysed problem from the report.
Problem problem_from_report(const AnalysisReport& report);

/// Measured graph, edges re-added in their recorded measurement order.
RelationshipGraph graph_from_report(const AnalysisReport& report);

/// Converts an inference result to named records.
void set_inference(AnalysisReport& report, const InferenceResult& result);

/// m x m matrix, one line per constraint, no header. Off-diagonal cells hold
/// the label abbreviation, followed by ",<conflict magnitude>" (4 decimals)
/// for dominance-labeled edges; the diagonal holds an em dash. Cells with a
/// comma are quoted.
std::string matrix_csv(const RelationshipGraph& graph);

/// Writes `contents` to `path`; throws InputError if the file cannot be
/// written.
void write_text_file(const std::string& path, std::string_view contents);

std::string read_text_file(const std::string& path);

}  // namespace conrel
