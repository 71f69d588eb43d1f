#pragma once

#include <cstddef>
#include <cstdint>

#include "conrel/gradient.hpp"
#include "conrel/independence.hpp"
#include "conrel/pairwise.hpp"
#include "conrel/problem.hpp"
#include "conrel/report.hpp"

namespace conrel {

struct AnalysisOptions {
  std::size_t samples = kDefaultSampleCount;
  std::uint64_t seed = 0;
  SamplingStrategy strategy = SamplingStrategy::LatinHypercube;
  double eps_tie = kDefaultEpsTie;
  double eps_feas = kDefaultEpsFeas;
  ProbeOptions probe;
  GradientMode gradient_mode = GradientMode::Symbolic;
  double gradient_step = kDefaultGradientStep;
};

ReportParameters report_parameters(const AnalysisOptions& options);

/// Draws the sample set for `options`. Throws InputError for fewer than two
/// samples or invalid tolerances.
SampleSet draw_samples(const Problem& problem, const AnalysisOptions& options);

/// Dominance verdict plus crossing count for one pair, by name.
ReportPair pair_record(const Problem& problem, const SampleSet& samples, std::size_t i, std::size_t j,
                       double eps_tie);

/// Gradient aggregates for every pair i < j.
std::vector<ReportGradient> gradient_records(const Problem& problem, const SampleSet& samples,
                                             GradientMode mode, double step);

/// Full pipeline: sampling, pairwise dominance, crossings, independence,
/// gradients, relationship graph, transitive inference, redundancy and
/// decomposition.
AnalysisReport analyze(const Problem& problem, const AnalysisOptions& options);

}  // namespace conrel
