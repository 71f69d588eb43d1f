#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "conrel/problem.hpp"

namespace conrel {

inline constexpr double kDefaultEpsTie = 1e-12;

/// Outcome of comparing two individuals on two constraints.
enum class Comparison { Harmony, Conflict, Tie };

/// TIE when either difference is within eps_tie; HARMONY when both
/// constraints move in the same direction between a and b; CONFLICT when they
/// move in opposite directions.
Comparison compare_pair(double fi_a, double fi_b, double fj_a, double fj_b,
                        double eps_tie = kDefaultEpsTie) noexcept;

/// Dominance-pair counts over all unordered sample pairs.
struct PairEvidence {
  std::uint64_t harmony_pairs = 0;
  std::uint64_t conflict_pairs = 0;
  std::uint64_t tie_pairs = 0;
  std::uint64_t total_pairs = 0;

  friend bool operator==(const PairEvidence&, const PairEvidence&) = default;
};

enum class PairLabel { TotalHarmony, TotalConflict, Mixed, Degenerate };

std::string_view to_string(PairLabel label);
PairLabel pair_label_from_string(std::string_view s);

struct PairVerdict {
  std::size_t i = 0;
  std::size_t j = 0;
  PairEvidence evidence;
  PairLabel label = PairLabel::Degenerate;
  /// harmony / (harmony + conflict); absent when every pair is tied.
  std::optional<double> harmony_magnitude;
  std::optional<double> conflict_magnitude;
};

/// Counts compare_pair over every unordered pair of positions.
/// Throws InputError on length mismatch.
PairEvidence count_evidence(std::span<const double> values_i, std::span<const double> values_j,
                            double eps_tie = kDefaultEpsTie);

/// Labels and magnitudes from evidence counts.
PairVerdict classify(std::size_t i, std::size_t j, const PairEvidence& evidence);

/// Classifies constraints i and j from the sampled values.
/// Throws InputError when i == j, an index is out of range, or fewer than two
/// samples are available.
PairVerdict analyze_pair(std::size_t i, std::size_t j, const SampleSet& samples,
                         double eps_tie = kDefaultEpsTie);

/// Number of crossing line pairs in the two-axis parallel-coordinate plot of
/// (values_i, values_j). Each sample is a segment from axis i to axis j; two
/// segments cross strictly between the axes when their order on one axis is
/// the reverse of their order on the other.
std::uint64_t crossing_count(std::span<const double> values_i, std::span<const double> values_j,
                             double eps_tie = kDefaultEpsTie);

}  // namespace conrel
