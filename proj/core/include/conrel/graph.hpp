#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "conrel/independence.hpp"
#include "conrel/pairwise.hpp"
#include "conrel/problem.hpp"

namespace conrel {

enum class EdgeLabel { TotalHarmony, TotalConflict, Mixed, Degenerate, Independent, Unknown };

std::string_view to_string(EdgeLabel label);
EdgeLabel edge_label_from_string(std::string_view s);
/// TH, TC, MX, DG, IND, UNK.
std::string_view abbreviation(EdgeLabel label);
EdgeLabel to_edge_label(PairLabel label);

enum class Provenance { Measured, Inferred };

std::string_view to_string(Provenance p);
Provenance provenance_from_string(std::string_view s);

struct Edge {
  EdgeLabel label = EdgeLabel::Unknown;
  Provenance provenance = Provenance::Measured;
  /// Dominance-method label; kept as an annotation when the edge is
  /// overridden to INDEPENDENT.
  std::optional<PairLabel> pairwise_label;
  std::optional<double> harmony_magnitude;
  std::optional<double> conflict_magnitude;
  /// Measurement order. Inference consumes total edges in this order.
  std::size_t sequence = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Complete graph over m constraints; every unordered pair holds one Edge,
/// UNKNOWN until measured or inferred.
class RelationshipGraph {
 public:
  explicit RelationshipGraph(std::size_t node_count);

  std::size_t node_count() const noexcept { return nodes_; }
  const Edge& edge(std::size_t i, std::size_t j) const;

  /// Records a measured edge. Throws InputError when the pair already holds a
  /// measured edge or i == j.
  void add_measured(std::size_t i, std::size_t j, Edge edge);
  void add_measured(std::size_t i, std::size_t j, EdgeLabel label);

  /// Records an inferred edge on an UNKNOWN pair; measured edges are never
  /// overwritten (throws InputError).
  void add_inferred(std::size_t i, std::size_t j, EdgeLabel label);

  std::size_t count(EdgeLabel label) const;

  friend bool operator==(const RelationshipGraph&, const RelationshipGraph&) = default;

 private:
  std::size_t slot(std::size_t i, std::size_t j) const;
  Edge& mutable_edge(std::size_t i, std::size_t j);

  std::size_t nodes_;
  std::size_t next_sequence_ = 0;
  std::vector<Edge> edges_;
};

/// Labels from pairwise verdicts, overridden to INDEPENDENT where the
/// effective supports are disjoint. Verdicts are measured in the given order.
/// Throws InputError for duplicate verdicts on one pair.
RelationshipGraph build_graph(std::size_t node_count, std::span<const PairVerdict> verdicts,
                              std::span<const IndependenceVerdict> independence);

struct InferredEdge {
  std::size_t i = 0;
  std::size_t j = 0;
  EdgeLabel label = EdgeLabel::Unknown;
  /// Node path from i to j along measured total edges.
  std::vector<std::size_t> witness;

  friend bool operator==(const InferredEdge&, const InferredEdge&) = default;
};

struct Contradiction {
  std::size_t i = 0;
  std::size_t j = 0;
  EdgeLabel measured = EdgeLabel::Unknown;
  EdgeLabel implied = EdgeLabel::Unknown;
  std::vector<std::size_t> witness;

  friend bool operator==(const Contradiction&, const Contradiction&) = default;
};

struct InferenceResult {
  std::vector<InferredEdge> inferred;
  std::vector<Contradiction> contradictions;
};

/// Sign calculus over measured total edges: TOTAL_HARMONY is +1,
/// TOTAL_CONFLICT is -1, and a path implies the product of its signs. Other
/// labels never propagate.
///
/// Edges are merged into a parity union-find in measurement order. An edge
/// whose endpoints are already connected with the opposite parity is
/// reported as a contradiction, witnessed by the spanning-forest path. Every
/// UNKNOWN pair inside a component receives the implied label.
InferenceResult infer_transitive(const RelationshipGraph& graph);

/// Copy of `graph` with the inferred edges added.
RelationshipGraph apply_inference(const RelationshipGraph& graph, const InferenceResult& result);

struct Redundancy {
  std::size_t redundant = 0;
  std::size_t witness = 0;

  friend bool operator==(const Redundancy&, const Redundancy&) = default;
};

/// For every TOTAL_HARMONY pair of inequalities (i, j): i is redundant with
/// witness j when every sampled point feasible for j is feasible for i and j
/// is feasible somewhere. Both directions are checked.
std::vector<Redundancy> detect_redundancy(const Problem& problem, const RelationshipGraph& graph,
                                          const SampleSet& samples,
                                          double eps_feas = kDefaultEpsFeas);

struct SubProblem {
  std::vector<std::size_t> constraints;
  std::vector<std::size_t> variables;

  friend bool operator==(const SubProblem&, const SubProblem&) = default;
};

struct Decomposition {
  std::vector<SubProblem> subproblems;
  /// Variables in no constraint's support.
  std::vector<std::size_t> unconstrained;
};

/// Connected components of the constraint-variable incidence graph built
/// from `supports` (one set per constraint). Sub-problems are ordered by
/// their smallest constraint index.
Decomposition decompose(const Problem& problem, std::span<const std::set<std::string>> supports);

}  // namespace conrel
