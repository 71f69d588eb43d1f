#include "conrel/pairwise.hpp"

#include <cmath>
#include <string>

#include "conrel/error.hpp"

namespace conrel {

Comparison compare_pair(double fi_a, double fi_b, double fj_a, double fj_b,
                        double eps_tie) noexcept {
  const double di = fi_a - fi_b;
  const double dj = fj_a - fj_b;
  if (std::abs(di) <= eps_tie || std::abs(dj) <= eps_tie) return Comparison::Tie;
  return (di < 0) == (dj < 0) ? Comparison::Harmony : Comparison::Conflict;
}

std::string_view to_string(PairLabel label) {
  switch (label) {
    case PairLabel::TotalHarmony: return "TOTAL_HARMONY";
    case PairLabel::TotalConflict: return "TOTAL_CONFLICT";
    case PairLabel::Mixed: return "MIXED";
    case PairLabel::Degenerate: return "DEGENERATE";
  }
  return "?";
}

PairLabel pair_label_from_string(std::string_view s) {
  if (s == "TOTAL_HARMONY") return PairLabel::TotalHarmony;
  if (s == "TOTAL_CONFLICT") return PairLabel::TotalConflict;
  if (s == "MIXED") return PairLabel::Mixed;
  if (s == "DEGENERATE") return PairLabel::Degenerate;
  throw InputError("unknown pair label '" + std::string(s) + "'");
}

PairEvidence count_evidence(std::span<const double> values_i, std::span<const double> values_j,
                            double eps_tie) {
  if (values_i.size() != values_j.size()) {
    throw InputError("constraint value columns differ in length");
  }
  PairEvidence ev;
  const std::size_t n = values_i.size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      switch (compare_pair(values_i[a], values_i[b], values_j[a], values_j[b], eps_tie)) {
        case Comparison::Harmony: ++ev.harmony_pairs; break;
        case Comparison::Conflict: ++ev.conflict_pairs; break;
        case Comparison::Tie: ++ev.tie_pairs; break;
      }
    }
  }
  ev.total_pairs = ev.harmony_pairs + ev.conflict_pairs + ev.tie_pairs;
  return ev;
}

PairVerdict classify(std::size_t i, std::size_t j, const PairEvidence& evidence) {
  PairVerdict v;
  v.i = i;
  v.j = j;
  v.evidence = evidence;
  const bool harmony = evidence.harmony_pairs > 0;
  const bool conflict = evidence.conflict_pairs > 0;
  if (harmony && conflict) {
    v.label = PairLabel::Mixed;
  } else if (harmony) {
    v.label = PairLabel::TotalHarmony;
  } else if (conflict) {
    v.label = PairLabel::TotalConflict;
  } else {
    v.label = PairLabel::Degenerate;
  }
  const std::uint64_t decided = evidence.harmony_pairs + evidence.conflict_pairs;
  if (decided > 0) {
    v.harmony_magnitude =
        static_cast<double>(evidence.harmony_pairs) / static_cast<double>(decided);
    v.conflict_magnitude =
        static_cast<double>(evidence.conflict_pairs) / static_cast<double>(decided);
  }
  return v;
}

PairVerdict analyze_pair(std::size_t i, std::size_t j, const SampleSet& samples, double eps_tie) {
  if (i == j) throw InputError("pair analysis needs two distinct constraints");
  if (i >= samples.constraint_count() || j >= samples.constraint_count()) {
    throw InputError("constraint index out of range");
  }
  if (samples.size() < 2) throw InputError("pairwise analysis needs >= 2 samples");
  if (!(eps_tie >= 0)) throw InputError("eps_tie must be non-negative");
  const auto vi = samples.column(i);
  const auto vj = samples.column(j);
  return classify(i, j, count_evidence(vi, vj, eps_tie));
}

std::uint64_t crossing_count(std::span<const double> values_i, std::span<const double> values_j,
                             double eps_tie) {
  if (values_i.size() != values_j.size()) {
    throw InputError("parallel-coordinate axes differ in length");
  }
  // Segment s_a(t) = (1 - t) * values_i[a] + t * values_j[a], t in [0, 1].
  // s_a - s_b is affine in t, so the segments meet strictly inside (0, 1)
  // exactly when the gap changes sign between the axes. Gaps within eps_tie
  // on either axis are shared vertices, not crossings.
  std::uint64_t crossings = 0;
  const std::size_t n = values_i.size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const double gap_left = values_i[a] - values_i[b];
      const double gap_right = values_j[a] - values_j[b];
      if (std::abs(gap_left) <= eps_tie || std::abs(gap_right) <= eps_tie) continue;
      if (std::signbit(gap_left) != std::signbit(gap_right)) ++crossings;
    }
  }
  return crossings;
}

}  // namespace conrel
