// Acceptance checks, one line per criterion. Exit status is nonzero when any
// criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <algorithm>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "conrel/analysis.hpp"
#include "conrel/generator.hpp"
#include "conrel/graph.hpp"
#include "conrel/pairwise.hpp"
#include "conrel/report.hpp"
#include "oracles.hpp"

using conrel::EdgeLabel;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

conrel::AnalysisReport analyze_reference(const std::string& key, double* elapsed = nullptr) {
  conrel::AnalysisOptions o;
  o.samples = 200;
  o.seed = 42;
  o.eps_tie = 1e-12;
  const auto t0 = Clock::now();
  auto r = conrel::analyze(conrel::paper_problem(key), o);
  if (elapsed) *elapsed = seconds_since(t0);
  return r;
}

int sign_of(EdgeLabel l) { return l == EdgeLabel::TotalHarmony ? 1 : -1; }

Outcome reference_classification() {
  Outcome out;
  char buf[160];
  std::string times;
  for (const char* key : {"conflict", "harmony", "independence"}) {
    double t = 0;
    const auto r = analyze_reference(key, &t);
    std::snprintf(buf, sizeof buf, "%s%s %.3fs", times.empty() ? "" : ", ", key, t);
    times += buf;
    if (t >= 1.0) out.fail(std::string(key) + " took too long");
    if (r.edges.size() != 1) {
      out.fail(std::string(key) + ": expected one edge");
      continue;
    }
    const auto& e = r.edges[0];
    if (std::string(key) == "conflict") {
      if (e.label != EdgeLabel::TotalConflict || e.conflict_magnitude != 1.0) out.fail("conflict pair mislabeled");
    } else if (std::string(key) == "harmony") {
      if (e.label != EdgeLabel::TotalHarmony || e.harmony_magnitude != 1.0) out.fail("harmony pair mislabeled");
    } else {
      const auto& v = r.independence.at(0);
      if (e.label != EdgeLabel::Independent || !v.syntactic_independent || !v.effective_independent) {
        out.fail("independence pair mislabeled");
      }
    }
  }
  if (out.ok) out.detail = times;
  return out;
}

Outcome redundancy() {
  Outcome out;
  const auto r = analyze_reference("harmony");
  const auto p = conrel::problem_from_report(r);
  const auto expr_of = [&](const std::string& name) { return p.constraint(*p.constraint_index(name)).expr; };
  if (r.redundancy.size() != 1) {
    out.fail(std::to_string(r.redundancy.size()) + " redundancy records");
    return out;
  }
  const auto& x = r.redundancy[0];
  if (!(expr_of(x.redundant) == conrel::expr::parse("-x1+x2")) ||
      !(expr_of(x.witness) == conrel::expr::parse("-x1+x2+1"))) {
    out.fail("wrong redundant constraint or witness");
  }
  if (out.ok) out.detail = "-x1+x2 implied by -x1+x2+1";
  return out;
}

Outcome crossings() {
  Outcome out;
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> pick_n(2, 6), pick_m(2, 8);
  std::size_t pairs = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto planted = conrel::generate_affine(pick_n(rng), pick_m(rng), rng(), conrel::AffinePlan{});
    const auto& p = planted.problem;
    const auto s = conrel::sample(p, 100, rng(), trial % 2 ? conrel::SamplingStrategy::Uniform
                                                           : conrel::SamplingStrategy::LatinHypercube);
    for (std::size_t i = 0; i < p.constraint_count(); ++i) {
      for (std::size_t j = i + 1; j < p.constraint_count(); ++j) {
        const auto rec = conrel::pair_record(p, s, i, j, conrel::kDefaultEpsTie);
        if (rec.crossing_count != rec.evidence.conflict_pairs) out.fail(p.name() + " " + rec.i + "," + rec.j);
        ++pairs;
      }
    }
  }
  if (out.ok) out.detail = std::to_string(pairs) + " pairs on 100 problems";
  return out;
}

// Compares infer_transitive with the path-enumeration oracle on one graph.
bool agrees_with_oracle(std::size_t m, const std::vector<std::pair<std::pair<std::size_t, std::size_t>, EdgeLabel>>& edges) {
  conrel::RelationshipGraph g(m);
  std::vector<oracle::SignedEdge> total;
  std::vector<std::pair<std::size_t, std::size_t>> measured;
  for (const auto& [ij, label] : edges) {
    g.add_measured(ij.first, ij.second, label);
    measured.push_back(ij);
    if (label == EdgeLabel::TotalHarmony || label == EdgeLabel::TotalConflict) {
      total.push_back({ij.first, ij.second, sign_of(label)});
    }
  }
  const auto expected = oracle::brute_inference(m, total, measured);
  const auto got = conrel::infer_transitive(g);
  if (!expected.paths_consistent || got.contradictions.size() != expected.contradictions.size()) return false;
  for (std::size_t k = 0; k < got.contradictions.size(); ++k) {
    const auto& c = got.contradictions[k];
    const auto& [e, implied] = expected.contradictions[k];
    if (std::minmax(c.i, c.j) != std::minmax(e.i, e.j) || sign_of(c.implied) != implied) return false;
  }
  if (got.inferred.size() != expected.inferred.size()) return false;
  for (const auto& e : got.inferred) {
    const auto it = expected.inferred.find({e.i, e.j});
    if (it == expected.inferred.end() || sign_of(e.label) != it->second) return false;
  }
  return true;
}

Outcome transitivity() {
  Outcome out;
  const std::vector<EdgeLabel> labels{EdgeLabel::TotalHarmony, EdgeLabel::TotalConflict, EdgeLabel::Mixed,
                                      EdgeLabel::Independent};
  for (const auto a : labels) {
    for (const auto b : labels) {
      conrel::RelationshipGraph g(3);
      g.add_measured(0, 1, a);
      g.add_measured(1, 2, b);
      const auto r = conrel::infer_transitive(g);
      const bool total = (a == EdgeLabel::TotalHarmony || a == EdgeLabel::TotalConflict) &&
                         (b == EdgeLabel::TotalHarmony || b == EdgeLabel::TotalConflict);
      if (!total) {
        if (!r.inferred.empty()) out.fail("inferred through a non-total edge");
        continue;
      }
      const EdgeLabel want = sign_of(a) * sign_of(b) > 0 ? EdgeLabel::TotalHarmony : EdgeLabel::TotalConflict;
      if (r.inferred.size() != 1 || r.inferred[0].i != 0 || r.inferred[0].j != 2 || r.inferred[0].label != want) {
        out.fail(std::string(conrel::abbreviation(a)) + " then " + std::string(conrel::abbreviation(b)));
      }
    }
  }

  // every labeling with m <= 4, labels {none, TH, TC, MX}
  std::size_t graphs = 0;
  const std::vector<EdgeLabel> pool{EdgeLabel::TotalHarmony, EdgeLabel::TotalConflict, EdgeLabel::Mixed};
  for (std::size_t m = 2; m <= 4 && out.ok; ++m) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) pairs.push_back({i, j});
    }
    std::size_t combos = 1;
    for (std::size_t k = 0; k < pairs.size(); ++k) combos *= 4;
    for (std::size_t code = 0; code < combos; ++code) {
      std::vector<std::pair<std::pair<std::size_t, std::size_t>, EdgeLabel>> edges;
      std::size_t c = code;
      for (const auto& ij : pairs) {
        const std::size_t digit = c % 4;
        c /= 4;
        if (digit) edges.push_back({ij, pool[digit - 1]});
      }
      ++graphs;
      if (!agrees_with_oracle(m, edges)) {
        out.fail("oracle disagreement at m = " + std::to_string(m));
        break;
      }
    }
  }
  // m = 5: every TH/TC labeling in a shuffled order
  std::mt19937_64 rng(6);
  {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < 5; ++i) {
      for (std::size_t j = i + 1; j < 5; ++j) pairs.push_back({i, j});
    }
    for (std::size_t code = 0; code < 59049 && out.ok; ++code) {
      std::vector<std::pair<std::pair<std::size_t, std::size_t>, EdgeLabel>> edges;
      std::size_t c = code;
      for (const auto& ij : pairs) {
        const std::size_t digit = c % 3;
        c /= 3;
        if (digit) edges.push_back({ij, pool[digit - 1]});
      }
      std::shuffle(edges.begin(), edges.end(), rng);
      ++graphs;
      if (!agrees_with_oracle(5, edges)) out.fail("oracle disagreement at m = 5");
    }
  }
  // m = 6: every edge support, labels drawn from {TH, TC, MX}
  {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < 6; ++i) {
      for (std::size_t j = i + 1; j < 6; ++j) pairs.push_back({i, j});
    }
    for (std::uint32_t mask = 0; mask < (1u << 15) && out.ok; ++mask) {
      std::vector<std::pair<std::pair<std::size_t, std::size_t>, EdgeLabel>> edges;
      for (std::size_t k = 0; k < pairs.size(); ++k) {
        if ((mask >> k) & 1u) edges.push_back({pairs[k], pool[rng() % 3]});
      }
      std::shuffle(edges.begin(), edges.end(), rng);
      ++graphs;
      if (!agrees_with_oracle(6, edges)) out.fail("oracle disagreement at m = 6");
    }
  }
  if (out.ok) out.detail = "16 compositions, " + std::to_string(graphs) + " graphs against the oracle";
  return out;
}

Outcome planted_recovery() {
  Outcome out;
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> pick_n(2, 6), pick_m(2, 8);
  std::size_t labels = 0;
  const auto t0 = Clock::now();
  for (int trial = 0; trial < 100; ++trial) {
    const auto planted = conrel::generate_affine(pick_n(rng), pick_m(rng), rng(), conrel::AffinePlan{});
    conrel::AnalysisOptions o;
    o.samples = 50;
    o.seed = rng();
    const auto r = conrel::analyze(planted.problem, o);
    if (!r.contradictions.empty()) out.fail(planted.problem.name() + " reported a contradiction");
    std::map<conrel::PairKey, EdgeLabel> got;
    for (const auto& e : r.edges) {
      got[{*planted.problem.constraint_index(e.i), *planted.problem.constraint_index(e.j)}] = e.label;
    }
    if (got != planted.planted_labels) out.fail(planted.problem.name() + " labels not recovered");
    labels += planted.planted_labels.size();
  }
  const double t = seconds_since(t0);
  if (t >= 10.0) out.fail("took " + std::to_string(t) + " s");
  if (out.ok) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%zu planted labels recovered, %.2fs", labels, t);
    out.detail = buf;
  }
  return out;
}

Outcome contradiction() {
  Outcome out;
  conrel::RelationshipGraph g(3);
  g.add_measured(0, 1, EdgeLabel::TotalHarmony);
  g.add_measured(1, 2, EdgeLabel::TotalConflict);
  g.add_measured(0, 2, EdgeLabel::TotalHarmony);
  const auto r = conrel::infer_transitive(g);
  if (r.contradictions.size() != 1) {
    out.fail(std::to_string(r.contradictions.size()) + " contradictions");
    return out;
  }
  const auto& c = r.contradictions[0];
  if (std::min(c.i, c.j) != 0 || std::max(c.i, c.j) != 2 || c.implied != EdgeLabel::TotalConflict) {
    out.fail("wrong pair or implied label");
  }
  if (out.ok) out.detail = "pair (1,3), implied TC";
  return out;
}

Outcome gradients() {
  Outcome out;
  std::mt19937_64 rng(7);
  std::size_t checked = 0;
  for (const auto& p : conrel::paper_suite()) {
    for (int k = 0; k < 100; ++k) {
      std::vector<double> x;
      for (const auto& v : p.variables()) {
        const double pad = 1e-3 * (v.upper - v.lower);
        x.push_back(std::uniform_real_distribution<double>(v.lower + pad, v.upper - pad)(rng));
      }
      for (std::size_t j = 0; j < p.constraint_count(); ++j) {
        const auto s = conrel::gradient(p, j, x);
        const auto fd = conrel::gradient(p, j, x, conrel::GradientMode::CentralDifference);
        for (std::size_t d = 0; d < s.size(); ++d) {
          if (!oracle::close_rel(s[d], fd[d], 1e-6)) out.fail(p.name() + " gradient mismatch");
          ++checked;
        }
      }
    }
  }
  const double quarter = std::cos(std::numbers::pi / 4);
  const auto mean = [](const conrel::AnalysisReport& r) { return r.gradients.at(0).aggregate; };
  const auto c = mean(analyze_reference("conflict"));
  const auto h = mean(analyze_reference("harmony"));
  const auto i = mean(analyze_reference("independence"));
  if (!c.mean_conflict || std::abs(*c.mean_conflict - 1.0) > 1e-9) out.fail("conflict pair mean");
  if (!h.mean_harmony || std::abs(*h.mean_harmony - 1.0) > 1e-9) out.fail("harmony pair mean");
  if (!i.mean_harmony || !i.mean_conflict || std::abs(*i.mean_harmony - quarter) > 1e-9 ||
      std::abs(*i.mean_conflict - quarter) > 1e-9) {
    out.fail("independence pair means");
  }
  if (out.ok) out.detail = std::to_string(checked) + " components, means within 1e-9";
  return out;
}

Outcome decomposition() {
  Outcome out;
  const auto ind = analyze_reference("independence");
  const auto con = analyze_reference("conflict");
  using Names = std::vector<std::string>;
  if (ind.subproblems.size() != 2 || ind.subproblems[0].variables != Names{"x1"} ||
      ind.subproblems[1].variables != Names{"x2"}) {
    out.fail("independence problem not split into {x1}, {x2}");
  }
  if (con.subproblems.size() != 1 || con.subproblems[0].variables != (Names{"x1", "x2"})) {
    out.fail("conflict problem split");
  }
  if (out.ok) out.detail = "2 sub-problems and 1 sub-problem";
  return out;
}

Outcome determinism() {
  Outcome out;
  const auto dir = std::filesystem::temp_directory_path() / "conrel_acceptance";
  std::filesystem::create_directories(dir);
  const auto problem = (dir / "merged.json").string();
  conrel::write_text_file(problem, conrel::problem_to_json(conrel::paper_merged()));
  std::string first;
  for (int k = 0; k < 3; ++k) {
    std::ostringstream os, es;
    const int code = conrel::cli::run({"analyze", problem, "--samples", "200", "--seed", "42"}, os, es);
    if (code != 0) out.fail("analyze exited " + std::to_string(code) + ": " + es.str());
    if (k == 0) first = os.str();
    else if (os.str() != first) out.fail("reports differ between runs");
  }
  std::filesystem::remove_all(dir);
  if (out.ok) out.detail = std::to_string(first.size()) + " bytes, identical over 3 runs";
  return out;
}

Outcome ordering_invariance() {
  Outcome out;
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    const auto planted = conrel::generate_affine(3, 4, rng(), conrel::AffinePlan{});
    const auto s = conrel::sample(planted.problem, 120, rng());
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = i + 1; j < 4; ++j) {
        std::vector<double> a, b, cubed;
        for (std::size_t k = 0; k < s.size(); ++k) {
          a.push_back(s.value(k, i));
          b.push_back(s.value(k, j));
          cubed.push_back(a.back() * a.back() * a.back());
        }
        if (!(conrel::count_evidence(a, b) == conrel::count_evidence(cubed, b))) {
          out.fail(planted.problem.name() + " counts changed");
        }
      }
    }
  }
  if (out.ok) out.detail = "20 instances, 120 pairs";
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"reference-example classification", reference_classification},
      {"redundancy", redundancy},
      {"crossing count equals conflict pairs", crossings},
      {"transitivity table and oracle", transitivity},
      {"planted recovery", planted_recovery},
      {"contradiction detection", contradiction},
      {"gradient checks", gradients},
      {"decomposition", decomposition},
      {"determinism", determinism},
      {"ordering invariance", ordering_invariance},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    std::printf("[%s] %2zu %s: %s\n", o.ok ? "PASS" : "FAIL", k + 1, criteria[k].first, o.detail.c_str());
    failed += !o.ok;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
