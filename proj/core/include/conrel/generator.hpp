#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "conrel/graph.hpp"
#include "conrel/problem.hpp"

namespace conrel {

/// The three two-constraint illustrations over x1, x2 in [-3, 3]:
/// conflicting, harmonious and independent, in that order.
std::vector<Problem> paper_suite();

/// The three illustrations merged into one six-constraint problem g1..g6
/// (conflict pair g1/g2, harmony pair g3/g4, independent pair g5/g6).
Problem paper_merged();

/// Returns a reference problem by key: "conflict", "harmony", "independence" or
/// "merged".
Problem paper_problem(std::string_view key);

using PairKey = std::pair<std::size_t, std::size_t>;

/// Requested relationships for an affine problem.
///
/// Text form: "random", a single label applied to every pair ("TH", "TC",
/// "IND"), or a comma-separated list of 1-based pairs such as
/// "1-2:TH,2-3:TC,1-4:IND". Pairs left out of a list are independent unless
/// their label follows from the listed total relationships.
struct AffinePlan {
  bool random = true;
  std::map<PairKey, EdgeLabel> labels;
  std::optional<EdgeLabel> all;

  static AffinePlan parse(std::string_view text);
};

struct PlantedProblem {
  Problem problem;
  /// Every unordered pair (i < j), labeled TOTAL_HARMONY, TOTAL_CONFLICT or
  /// INDEPENDENT.
  std::map<PairKey, EdgeLabel> planted_labels;
};

/// Affine constraints f_j = s_j * (a_c . x) + b_j where c is the plan
/// component of j. Components use disjoint variable blocks; within a
/// component, s_i * s_j = +1 gives total harmony and -1 total conflict.
/// Direction entries satisfy 0.1 <= |a_k| <= 1, offsets lie in [-1, 1] and
/// every variable ranges over [-5, 5].
///
/// Throws InputError for plans that are inconsistent under the sign calculus
/// or need more independent blocks than there are variables.
PlantedProblem generate_affine(std::size_t n, std::size_t m, std::uint64_t seed,
                               const AffinePlan& plan);

/// {"pairs": [{"i": name, "j": name, "label": LABEL}, ...]}
std::string planted_labels_to_json(const PlantedProblem& planted);

}  // namespace conrel
