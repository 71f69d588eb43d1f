#pragma once

#include <cstddef>
#include <set>
#include <string>

#include "conrel/problem.hpp"

namespace conrel {

/// Perturbation probe settings. Each variable is moved by
/// `delta_fraction * (upper - lower)` in both directions, clamped to bounds.
struct ProbeOptions {
  double delta_fraction = 0.01;
  double eps_value = 1e-9;
};

/// Variables whose perturbation changes constraint j by more than eps_value
/// at some sample point. Only syntactic support is probed, so the result is
/// always a subset of it. Throws NumericalError for non-finite probes.
std::set<std::string> effective_support(const Problem& problem, std::size_t j,
                                        const SampleSet& samples, const ProbeOptions& options = {});

struct IndependenceVerdict {
  std::size_t i = 0;
  std::size_t j = 0;
  bool syntactic_independent = false;
  bool effective_independent = false;
  std::set<std::string> effective_support_i;
  std::set<std::string> effective_support_j;
};

IndependenceVerdict independence_verdict(const Problem& problem, std::size_t i, std::size_t j,
                                         const SampleSet& samples,
                                         const ProbeOptions& options = {});

/// Same as above with supports already computed.
IndependenceVerdict independence_verdict(const Problem& problem, std::size_t i, std::size_t j,
                                         const std::set<std::string>& effective_i,
                                         const std::set<std::string>& effective_j);

bool disjoint(const std::set<std::string>& a, const std::set<std::string>& b);

}  // namespace conrel
