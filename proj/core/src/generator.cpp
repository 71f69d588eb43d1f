#include "conrel/generator.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <random>

#include <json.hpp>

#include "conrel/error.hpp"

namespace conrel {

namespace {

Constraint inequality(std::string name, std::string_view text) {
  return {std::move(name), ConstraintKind::Inequality, expr::parse(text)};
}

std::vector<VariableSpec> reference_box() { return {{"x1", -3.0, 3.0}, {"x2", -3.0, 3.0}}; }

constexpr std::string_view kConflictI = "x1*exp(-x1^2-x2^2)";
constexpr std::string_view kConflictJ = "-0.1-x1*exp(-x1^2-x2^2)";
constexpr std::string_view kHarmonyI = "-x1+x2";
constexpr std::string_view kHarmonyJ = "-x1+x2+1";
constexpr std::string_view kIndependentI = "2*sin(x1)-1";
constexpr std::string_view kIndependentJ = "x2^2-1";

}  // namespace

std::vector<Problem> paper_suite() {
  std::vector<Problem> out;
  out.emplace_back("paper-conflict", reference_box(),
                   std::vector{inequality("g1", kConflictI), inequality("g2", kConflictJ)});
  out.emplace_back("paper-harmony", reference_box(),
                   std::vector{inequality("g1", kHarmonyI), inequality("g2", kHarmonyJ)});
  out.emplace_back("paper-independence", reference_box(),
                   std::vector{inequality("g1", kIndependentI), inequality("g2", kIndependentJ)});
  return out;
}

Problem paper_merged() {
  return Problem("paper-merged", reference_box(),
                 std::vector{inequality("g1", kConflictI), inequality("g2", kConflictJ),
                             inequality("g3", kHarmonyI), inequality("g4", kHarmonyJ),
                             inequality("g5", kIndependentI), inequality("g6", kIndependentJ)});
}

Problem paper_problem(std::string_view key) {
  if (key == "conflict") return paper_suite()[0];
  if (key == "harmony") return paper_suite()[1];
  if (key == "independence") return paper_suite()[2];
  if (key == "merged") return paper_merged();
  throw InputError("unknown reference problem '" + std::string(key) +
                   "' (expected conflict, harmony, independence or merged)");
}

// ---------------------------------------------------------------------------
// Plans

namespace {

EdgeLabel plan_label(std::string_view s) {
  if (s == "TH" || s == "TOTAL_HARMONY") return EdgeLabel::TotalHarmony;
  if (s == "TC" || s == "TOTAL_CONFLICT") return EdgeLabel::TotalConflict;
  if (s == "IND" || s == "INDEPENDENT") return EdgeLabel::Independent;
  throw InputError("plan label must be TH, TC or IND, got '" + std::string(s) + "'");
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::size_t parse_index(std::string_view s, std::string_view item) {
  s = trim(s);
  std::size_t v = 0;
  if (s.empty()) throw InputError("malformed plan entry '" + std::string(item) + "'");
  for (const char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw InputError("malformed plan entry '" + std::string(item) + "'");
    }
    v = v * 10 + static_cast<std::size_t>(c - '0');
  }
  if (v == 0) throw InputError("plan indices are 1-based: '" + std::string(item) + "'");
  return v - 1;
}

}  // namespace

AffinePlan AffinePlan::parse(std::string_view text) {
  text = trim(text);
  AffinePlan plan;
  if (text.empty() || text == "random") return plan;
  plan.random = false;
  if (text.find(':') == std::string_view::npos) {
    plan.all = plan_label(text);
    return plan;
  }
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view item = trim(text.substr(0, comma));
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    const auto colon = item.find(':');
    const auto dash = item.find('-');
    if (colon == std::string_view::npos || dash == std::string_view::npos || dash > colon) {
      throw InputError("malformed plan entry '" + std::string(item) + "' (expected i-j:LABEL)");
    }
    std::size_t i = parse_index(item.substr(0, dash), item);
    std::size_t j = parse_index(item.substr(dash + 1, colon - dash - 1), item);
    if (i == j) throw InputError("plan pairs a constraint with itself: '" + std::string(item) + "'");
    if (i > j) std::swap(i, j);
    const EdgeLabel label = plan_label(trim(item.substr(colon + 1)));
    const auto [it, inserted] = plan.labels.emplace(PairKey{i, j}, label);
    if (!inserted && it->second != label) {
      throw InputError("plan gives pair " + std::to_string(i + 1) + "-" + std::to_string(j + 1) +
                       " two different labels");
    }
  }
  return plan;
}

// ---------------------------------------------------------------------------
// Affine generation

namespace {

struct Layout {
  std::vector<std::size_t> component;  // per constraint
  std::vector<int> sign;               // per constraint, +1 / -1
  std::size_t components = 0;
};

Layout random_layout(std::size_t n, std::size_t m, std::mt19937_64& rng) {
  Layout l;
  std::uniform_int_distribution<std::size_t> pick_k(1, std::min(n, m));
  l.components = pick_k(rng);
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  l.component.assign(m, 0);
  std::uniform_int_distribution<std::size_t> pick_c(0, l.components - 1);
  for (std::size_t r = 0; r < m; ++r) {
    l.component[order[r]] = r < l.components ? r : pick_c(rng);
  }
  std::bernoulli_distribution coin(0.5);
  l.sign.resize(m);
  for (auto& s : l.sign) s = coin(rng) ? 1 : -1;
  return l;
}

Layout planned_layout(std::size_t n, std::size_t m, const AffinePlan& plan, std::mt19937_64& rng) {
  std::map<PairKey, EdgeLabel> labels = plan.labels;
  if (plan.all) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) labels[{i, j}] = *plan.all;
    }
  }
  for (const auto& [key, label] : labels) {
    if (key.second >= m) {
      throw InputError("plan refers to constraint " + std::to_string(key.second + 1) +
                       " but m = " + std::to_string(m));
    }
  }

  // parity union-find over the total relationships
  std::vector<std::size_t> parent(m);
  std::vector<int> parity(m, 0);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  const auto find = [&](std::size_t x) {
    int p = 0;
    while (parent[x] != x) {
      p ^= parity[x];
      x = parent[x];
    }
    return std::pair{x, p};
  };
  for (const auto& [key, label] : labels) {
    if (label == EdgeLabel::Independent) continue;
    const int want = label == EdgeLabel::TotalConflict ? 1 : 0;
    const auto [ri, pi] = find(key.first);
    const auto [rj, pj] = find(key.second);
    if (ri == rj) {
      if ((pi ^ pj) != want) {
        throw InputError("unrealizable plan: pair " + std::to_string(key.first + 1) + "-" +
                         std::to_string(key.second + 1) +
                         " contradicts the signs implied by the other total relationships");
      }
      continue;
    }
    parent[rj] = ri;
    parity[rj] = pi ^ pj ^ want;
  }
  for (const auto& [key, label] : labels) {
    if (label != EdgeLabel::Independent) continue;
    if (find(key.first).first == find(key.second).first) {
      throw InputError("unrealizable plan: pair " + std::to_string(key.first + 1) + "-" +
                       std::to_string(key.second + 1) +
                       " is marked independent but linked through total relationships");
    }
  }

  Layout l;
  l.component.assign(m, m);
  l.sign.assign(m, 1);
  std::vector<std::size_t> id_of_root(m, m);
  std::vector<int> root_sign(m, 1);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t j = 0; j < m; ++j) {
    const auto [root, p] = find(j);
    if (id_of_root[root] == m) {
      id_of_root[root] = l.components++;
      root_sign[root] = coin(rng) ? 1 : -1;
    }
    l.component[j] = id_of_root[root];
    l.sign[j] = p ? -root_sign[root] : root_sign[root];
  }
  if (l.components > n) {
    throw InputError("plan needs " + std::to_string(l.components) +
                     " independent variable blocks but n = " + std::to_string(n));
  }
  return l;
}

expr::Expr affine_form(const std::vector<std::pair<std::size_t, double>>& terms) {
  using expr::Expr;
  using expr::Op;
  std::optional<Expr> sum;
  for (const auto& [k, a] : terms) {
    Expr term = Expr::binary(Op::Mul, Expr::constant(std::abs(a)),
                             Expr::variable("x" + std::to_string(k + 1)));
    if (!sum) {
      sum = a < 0 ? Expr::negate(term) : term;
    } else {
      sum = Expr::binary(a < 0 ? Op::Sub : Op::Add, *sum, term);
    }
  }
  return *sum;
}

}  // namespace

PlantedProblem generate_affine(std::size_t n, std::size_t m, std::uint64_t seed,
                               const AffinePlan& plan) {
  if (n < 2) throw InputError("affine generation needs n >= 2");
  if (m < 2) throw InputError("affine generation needs m >= 2");
  std::mt19937_64 rng(seed);
  const Layout layout = plan.random ? random_layout(n, m, rng) : planned_layout(n, m, plan, rng);

  // contiguous variable blocks, sizes differing by at most one
  std::vector<std::vector<std::size_t>> blocks(layout.components);
  for (std::size_t c = 0, k = 0; c < layout.components; ++c) {
    const std::size_t size = n / layout.components + (c < n % layout.components ? 1 : 0);
    for (std::size_t s = 0; s < size; ++s) blocks[c].push_back(k++);
  }

  std::uniform_real_distribution<double> magnitude(0.1, 1.0);
  std::uniform_real_distribution<double> offset(-1.0, 1.0);
  std::bernoulli_distribution coin(0.5);

  std::vector<expr::Expr> directions;
  for (const auto& block : blocks) {
    std::vector<std::pair<std::size_t, double>> terms;
    for (const std::size_t k : block) {
      const double a = magnitude(rng);
      terms.emplace_back(k, coin(rng) ? a : -a);
    }
    directions.push_back(affine_form(terms));
  }

  std::vector<Constraint> constraints;
  for (std::size_t j = 0; j < m; ++j) {
    using expr::Expr;
    using expr::Op;
    const expr::Expr& base = directions[layout.component[j]];
    Expr body = layout.sign[j] > 0 ? base : Expr::negate(base);
    const double b = offset(rng);
    body = Expr::binary(b < 0 ? Op::Sub : Op::Add, body, Expr::constant(std::abs(b)));
    // round-trip through text so the stored tree matches the problem file
    constraints.push_back({"c" + std::to_string(j + 1), ConstraintKind::Inequality,
                           expr::parse(expr::to_string(body))});
  }

  std::vector<VariableSpec> variables;
  for (std::size_t k = 0; k < n; ++k) variables.push_back({"x" + std::to_string(k + 1), -5.0, 5.0});

  PlantedProblem out{Problem("affine-n" + std::to_string(n) + "-m" + std::to_string(m) + "-s" +
                                 std::to_string(seed),
                             std::move(variables), std::move(constraints)),
                     {}};
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      EdgeLabel label = EdgeLabel::Independent;
      if (layout.component[i] == layout.component[j]) {
        label = layout.sign[i] * layout.sign[j] > 0 ? EdgeLabel::TotalHarmony
                                                    : EdgeLabel::TotalConflict;
      }
      out.planted_labels[{i, j}] = label;
    }
  }
  return out;
}

std::string planted_labels_to_json(const PlantedProblem& planted) {
  using json = nlohmann::ordered_json;
  json pairs = json::array();
  const auto& cons = planted.problem.constraints();
  for (const auto& [key, label] : planted.planted_labels) {
    pairs.push_back({{"i", cons[key.first].name},
                     {"j", cons[key.second].name},
                     {"label", std::string(to_string(label))}});
  }
  json doc;
  doc["pairs"] = std::move(pairs);
  return doc.dump(2) + "\n";
}

}  // namespace conrel
