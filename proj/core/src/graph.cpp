#include "conrel/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>
#include <utility>

#include "conrel/error.hpp"

namespace conrel {

std::string_view to_string(EdgeLabel label) {
  switch (label) {
    case EdgeLabel::TotalHarmony: return "TOTAL_HARMONY";
    case EdgeLabel::TotalConflict: return "TOTAL_CONFLICT";
    case EdgeLabel::Mixed: return "MIXED";
    case EdgeLabel::Degenerate: return "DEGENERATE";
    case EdgeLabel::Independent: return "INDEPENDENT";
    case EdgeLabel::Unknown: return "UNKNOWN";
  }
  return "?";
}

EdgeLabel edge_label_from_string(std::string_view s) {
  for (const auto l : {EdgeLabel::TotalHarmony, EdgeLabel::TotalConflict, EdgeLabel::Mixed,
                       EdgeLabel::Degenerate, EdgeLabel::Independent, EdgeLabel::Unknown}) {
    if (to_string(l) == s) return l;
  }
  throw InputError("unknown edge label '" + std::string(s) + "'");
}

std::string_view abbreviation(EdgeLabel label) {
  switch (label) {
    case EdgeLabel::TotalHarmony: return "TH";
    case EdgeLabel::TotalConflict: return "TC";
    case EdgeLabel::Mixed: return "MX";
    case EdgeLabel::Degenerate: return "DG";
    case EdgeLabel::Independent: return "IND";
    case EdgeLabel::Unknown: return "UNK";
  }
  return "?";
}

EdgeLabel to_edge_label(PairLabel label) {
  switch (label) {
    case PairLabel::TotalHarmony: return EdgeLabel::TotalHarmony;
    case PairLabel::TotalConflict: return EdgeLabel::TotalConflict;
    case PairLabel::Mixed: return EdgeLabel::Mixed;
    case PairLabel::Degenerate: return EdgeLabel::Degenerate;
  }
  return EdgeLabel::Unknown;
}

std::string_view to_string(Provenance p) { return p == Provenance::Measured ? "measured" : "inferred"; }

Provenance provenance_from_string(std::string_view s) {
  if (s == "measured") return Provenance::Measured;
  if (s == "inferred") return Provenance::Inferred;
  throw InputError("unknown provenance '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// RelationshipGraph

RelationshipGraph::RelationshipGraph(std::size_t node_count)
    : nodes_(node_count), edges_(node_count < 2 ? 0 : node_count * (node_count - 1) / 2) {}

std::size_t RelationshipGraph::slot(std::size_t i, std::size_t j) const {
  if (i == j) throw InputError("a constraint has no edge to itself");
  if (i >= nodes_ || j >= nodes_) throw InputError("constraint index out of range");
  if (i > j) std::swap(i, j);
  // row-major upper triangle without the diagonal
  return i * nodes_ - i * (i + 1) / 2 + (j - i - 1);
}

const Edge& RelationshipGraph::edge(std::size_t i, std::size_t j) const { return edges_[slot(i, j)]; }

Edge& RelationshipGraph::mutable_edge(std::size_t i, std::size_t j) { return edges_[slot(i, j)]; }

void RelationshipGraph::add_measured(std::size_t i, std::size_t j, Edge edge) {
  Edge& e = mutable_edge(i, j);
  if (e.label != EdgeLabel::Unknown && e.provenance == Provenance::Measured) {
    throw InputError("pair (" + std::to_string(i) + ", " + std::to_string(j) +
                     ") already has a measured edge");
  }
  edge.provenance = Provenance::Measured;
  edge.sequence = next_sequence_++;
  e = std::move(edge);
}

void RelationshipGraph::add_measured(std::size_t i, std::size_t j, EdgeLabel label) {
  Edge e;
  e.label = label;
  add_measured(i, j, std::move(e));
}

void RelationshipGraph::add_inferred(std::size_t i, std::size_t j, EdgeLabel label) {
  Edge& e = mutable_edge(i, j);
  if (e.label != EdgeLabel::Unknown) {
    throw InputError("inference may only label UNKNOWN pairs");
  }
  e = Edge{};
  e.label = label;
  e.provenance = Provenance::Inferred;
}

std::size_t RelationshipGraph::count(EdgeLabel label) const {
  return static_cast<std::size_t>(
      std::count_if(edges_.begin(), edges_.end(), [&](const Edge& e) { return e.label == label; }));
}

RelationshipGraph build_graph(std::size_t node_count, std::span<const PairVerdict> verdicts,
                              std::span<const IndependenceVerdict> independence) {
  RelationshipGraph g(node_count);

  const auto key = [](std::size_t i, std::size_t j) { return std::pair{std::min(i, j), std::max(i, j)}; };
  std::set<std::pair<std::size_t, std::size_t>> seen_independence;
  std::set<std::pair<std::size_t, std::size_t>> independent_pairs;
  for (const auto& iv : independence) {
    if (!seen_independence.insert(key(iv.i, iv.j)).second) {
      throw InputError("duplicate independence verdict for pair (" + std::to_string(iv.i) + ", " +
                       std::to_string(iv.j) + ")");
    }
    if (iv.effective_independent) independent_pairs.insert(key(iv.i, iv.j));
  }

  std::set<std::pair<std::size_t, std::size_t>> measured;
  for (const auto& v : verdicts) {
    if (!measured.insert(key(v.i, v.j)).second) {
      throw InputError("duplicate verdict for pair (" + std::to_string(v.i) + ", " +
                       std::to_string(v.j) + ")");
    }
    Edge e;
    e.pairwise_label = v.label;
    e.harmony_magnitude = v.harmony_magnitude;
    e.conflict_magnitude = v.conflict_magnitude;
    e.label = independent_pairs.count(key(v.i, v.j)) ? EdgeLabel::Independent
                                                     : to_edge_label(v.label);
    g.add_measured(v.i, v.j, std::move(e));
  }
  for (const auto& p : independent_pairs) {
    if (!measured.count(p)) g.add_measured(p.first, p.second, EdgeLabel::Independent);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Transitivity

namespace {

// Union-find whose links carry the parity (0 = same sign, 1 = opposite)
// between a node and its parent.
class ParityUnionFind {
 public:
  explicit ParityUnionFind(std::size_t n) : parent_(n), parity_(n, 0), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::pair<std::size_t, int> find(std::size_t x) {
    int parity = 0;
    std::size_t root = x;
    while (parent_[root] != root) {
      parity ^= parity_[root];
      root = parent_[root];
    }
    // path compression, re-expressing each parity relative to the root
    int p = parity;
    while (parent_[x] != root) {
      const std::size_t next = parent_[x];
      const int own = parity_[x];
      parent_[x] = root;
      parity_[x] = p;
      p ^= own;
      x = next;
    }
    return {root, parity};
  }

  void unite(std::size_t a, std::size_t b, int parity) {
    auto [ra, pa] = find(a);
    auto [rb, pb] = find(b);
    if (ra == rb) return;
    const int link = pa ^ pb ^ parity;
    if (rank_[ra] < rank_[rb]) std::swap(ra, rb);
    parent_[rb] = ra;
    parity_[rb] = link;
    if (rank_[ra] == rank_[rb]) ++rank_[ra];
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<int> parity_;
  std::vector<int> rank_;
};

bool is_total(EdgeLabel l) { return l == EdgeLabel::TotalHarmony || l == EdgeLabel::TotalConflict; }
int parity_of(EdgeLabel l) { return l == EdgeLabel::TotalConflict ? 1 : 0; }
EdgeLabel label_of(int parity) { return parity ? EdgeLabel::TotalConflict : EdgeLabel::TotalHarmony; }

std::vector<std::size_t> forest_path(const std::vector<std::vector<std::size_t>>& adjacency,
                                     std::size_t from, std::size_t to) {
  std::vector<std::size_t> prev(adjacency.size(), adjacency.size());
  std::queue<std::size_t> q;
  q.push(from);
  prev[from] = from;
  while (!q.empty()) {
    const std::size_t u = q.front();
    q.pop();
    if (u == to) break;
    for (const std::size_t v : adjacency[u]) {
      if (prev[v] == adjacency.size()) {
        prev[v] = u;
        q.push(v);
      }
    }
  }
  std::vector<std::size_t> path;
  for (std::size_t u = to; u != from; u = prev[u]) path.push_back(u);
  path.push_back(from);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

InferenceResult infer_transitive(const RelationshipGraph& graph) {
  const std::size_t m = graph.node_count();
  struct TotalEdge {
    std::size_t i, j, sequence;
    EdgeLabel label;
  };
  std::vector<TotalEdge> total;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const Edge& e = graph.edge(i, j);
      if (e.provenance == Provenance::Measured && is_total(e.label)) {
        total.push_back({i, j, e.sequence, e.label});
      }
    }
  }
  std::stable_sort(total.begin(), total.end(),
                   [](const TotalEdge& a, const TotalEdge& b) { return a.sequence < b.sequence; });

  InferenceResult result;
  ParityUnionFind uf(m);
  std::vector<std::vector<std::size_t>> forest(m);
  for (const auto& e : total) {
    const auto [ri, pi] = uf.find(e.i);
    const auto [rj, pj] = uf.find(e.j);
    if (ri != rj) {
      uf.unite(e.i, e.j, parity_of(e.label));
      forest[e.i].push_back(e.j);
      forest[e.j].push_back(e.i);
    } else if ((pi ^ pj) != parity_of(e.label)) {
      result.contradictions.push_back(
          {e.i, e.j, e.label, label_of(pi ^ pj), forest_path(forest, e.i, e.j)});
    }
  }

  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (graph.edge(i, j).label != EdgeLabel::Unknown) continue;
      const auto [ri, pi] = uf.find(i);
      const auto [rj, pj] = uf.find(j);
      if (ri != rj) continue;
      result.inferred.push_back({i, j, label_of(pi ^ pj), forest_path(forest, i, j)});
    }
  }
  return result;
}

RelationshipGraph apply_inference(const RelationshipGraph& graph, const InferenceResult& result) {
  RelationshipGraph out = graph;
  for (const auto& e : result.inferred) out.add_inferred(e.i, e.j, e.label);
  return out;
}

// ---------------------------------------------------------------------------
// Redundancy

std::vector<Redundancy> detect_redundancy(const Problem& problem, const RelationshipGraph& graph,
                                          const SampleSet& samples, double eps_feas) {
  const std::size_t m = problem.constraint_count();
  if (graph.node_count() != m) throw InputError("graph does not match the problem");
  if (samples.size() == 0) throw InputError("redundancy detection needs samples");
  if (!(eps_feas >= 0)) throw InputError("eps_feas must be non-negative");

  const auto feasible = [&](std::size_t a, std::size_t j) {
    const double v = samples.value(a, j);
    return problem.constraint(j).kind == ConstraintKind::Inequality ? v <= eps_feas
                                                                    : std::abs(v) <= eps_feas;
  };
  // i is implied by witness: feasible(witness) => feasible(i) on every sample
  const auto covered = [&](std::size_t i, std::size_t witness) {
    bool any = false;
    for (std::size_t a = 0; a < samples.size(); ++a) {
      if (!feasible(a, witness)) continue;
      any = true;
      if (!feasible(a, i)) return false;
    }
    return any;
  };

  std::vector<Redundancy> out;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (graph.edge(i, j).label != EdgeLabel::TotalHarmony) continue;
      if (problem.constraint(i).kind != ConstraintKind::Inequality ||
          problem.constraint(j).kind != ConstraintKind::Inequality) {
        continue;
      }
      if (covered(i, j)) out.push_back({i, j});
      if (covered(j, i)) out.push_back({j, i});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Decomposition

Decomposition decompose(const Problem& problem, std::span<const std::set<std::string>> supports) {
  const std::size_t m = problem.constraint_count();
  const std::size_t n = problem.dimension();
  if (supports.size() != m) throw InputError("need one support set per constraint");

  // nodes 0..m-1 are constraints, m..m+n-1 variables
  std::vector<std::size_t> parent(m + n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  const auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  std::vector<bool> used(n, false);
  for (std::size_t j = 0; j < m; ++j) {
    for (const auto& name : supports[j]) {
      const auto k = problem.variable_index(name);
      if (!k) throw InputError("support of constraint " + std::to_string(j) +
                               " names unknown variable '" + name + "'");
      used[*k] = true;
      parent[find(m + *k)] = find(j);
    }
  }

  Decomposition d;
  std::vector<std::size_t> component_of_root(m + n, m + n);
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t r = find(j);
    if (component_of_root[r] == m + n) {
      component_of_root[r] = d.subproblems.size();
      d.subproblems.emplace_back();
    }
    d.subproblems[component_of_root[r]].constraints.push_back(j);
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (!used[k]) {
      d.unconstrained.push_back(k);
      continue;
    }
    d.subproblems[component_of_root[find(m + k)]].variables.push_back(k);
  }
  return d;
}

}  // namespace conrel
