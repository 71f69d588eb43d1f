#include "conrel/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "conrel/error.hpp"
#include "conrel/expr.hpp"

namespace conrel {

namespace {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Emission. nlohmann formats floats with the shortest round-trip form; the
// report asks for a fixed 17 digits, so the tree is written by hand.

void write_string(std::string& out, const std::string& s) {
  out += '"';
  for (const unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  out += '"';
}

void write_double(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".en") == std::string::npos) s += ".0";
  out += s;
}

void indent(std::string& out, int depth) { out.append(static_cast<std::size_t>(depth) * 2, ' '); }

void write_value(std::string& out, const json& v, int depth) {
  switch (v.type()) {
    case json::value_t::null: out += "null"; return;
    case json::value_t::boolean: out += v.get<bool>() ? "true" : "false"; return;
    case json::value_t::number_integer: out += std::to_string(v.get<std::int64_t>()); return;
    case json::value_t::number_unsigned: out += std::to_string(v.get<std::uint64_t>()); return;
    case json::value_t::number_float: write_double(out, v.get<double>()); return;
    case json::value_t::string: write_string(out, v.get<std::string>()); return;
    case json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      const bool scalars = std::none_of(v.begin(), v.end(), [](const json& e) { return e.is_structured(); });
      if (scalars) {
        out += '[';
        bool first = true;
        for (const auto& e : v) {
          if (!first) out += ", ";
          first = false;
          write_value(out, e, depth);
        }
        out += ']';
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& e : v) {
        if (!first) out += ",\n";
        first = false;
        indent(out, depth + 1);
        write_value(out, e, depth + 1);
      }
      out += '\n';
      indent(out, depth);
      out += ']';
      return;
    }
    case json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, e] : v.items()) {
        if (!first) out += ",\n";
        first = false;
        indent(out, depth + 1);
        write_string(out, key);
        out += ": ";
        write_value(out, e, depth + 1);
      }
      out += '\n';
      indent(out, depth);
      out += '}';
      return;
    }
    default: throw Error("unsupported JSON value in report");
  }
}

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json names(const std::vector<std::string>& v) {
  json a = json::array();
  for (const auto& s : v) a.push_back(s);
  return a;
}

json to_json(const AnalysisReport& r) {
  json doc;
  doc["schema_version"] = r.schema_version;
  doc["tool"] = {{"name", std::string(kToolName)}, {"version", r.tool_version}};

  json problem;
  problem["name"] = r.problem_name;
  problem["objective"] = r.objective ? json(*r.objective) : json(nullptr);
  json vars = json::array();
  for (const auto& v : r.variables) {
    vars.push_back({{"name", v.name}, {"lower", v.lower}, {"upper", v.upper}});
  }
  problem["variables"] = std::move(vars);
  json cons = json::array();
  for (const auto& c : r.constraints) {
    cons.push_back({{"name", c.name},
                    {"kind", std::string(to_string(c.kind))},
                    {"expr", c.expr},
                    {"syntactic_support", names(c.syntactic_support)},
                    {"effective_support", names(c.effective_support)}});
  }
  problem["constraints"] = std::move(cons);
  doc["problem"] = std::move(problem);

  const auto& p = r.parameters;
  doc["parameters"] = {{"samples", p.samples},
                       {"seed", p.seed},
                       {"strategy", std::string(to_string(p.strategy))},
                       {"eps_tie", p.eps_tie},
                       {"eps_feas", p.eps_feas},
                       {"probe_fraction", p.probe_fraction},
                       {"eps_value", p.eps_value},
                       {"gradient_mode", std::string(to_string(p.gradient_mode))},
                       {"gradient_step", p.gradient_step}};

  json pairs = json::array();
  for (const auto& q : r.pairs) {
    pairs.push_back({{"i", q.i},
                     {"j", q.j},
                     {"label", std::string(to_string(q.label))},
                     {"harmony_pairs", q.evidence.harmony_pairs},
                     {"conflict_pairs", q.evidence.conflict_pairs},
                     {"tie_pairs", q.evidence.tie_pairs},
                     {"total_pairs", q.evidence.total_pairs},
                     {"harmony_magnitude", opt(q.harmony_magnitude)},
                     {"conflict_magnitude", opt(q.conflict_magnitude)},
                     {"crossing_count", q.crossing_count},
                     {"samples", q.samples},
                     {"seed", q.seed}});
  }
  doc["pairs"] = std::move(pairs);

  json ind = json::array();
  for (const auto& q : r.independence) {
    ind.push_back({{"i", q.i},
                   {"j", q.j},
                   {"syntactic_independent", q.syntactic_independent},
                   {"effective_independent", q.effective_independent}});
  }
  doc["independence"] = std::move(ind);

  json grads = json::array();
  for (const auto& g : r.gradients) {
    const auto& a = g.aggregate;
    grads.push_back({{"i", g.i},
                     {"j", g.j},
                     {"mean_harmony", opt(a.mean_harmony)},
                     {"mean_conflict", opt(a.mean_conflict)},
                     {"evaluated_points", a.evaluated_points},
                     {"zero_gradient_points", a.zero_gradient_points},
                     {"antiparallel_points", a.antiparallel_points},
                     {"boundary_points", a.boundary_points}});
  }
  doc["gradients"] = std::move(grads);

  json edges = json::array();
  for (const auto& e : r.edges) {
    edges.push_back({{"i", e.i},
                     {"j", e.j},
                     {"label", std::string(to_string(e.label))},
                     {"provenance", std::string(to_string(e.provenance))},
                     {"pairwise_label",
                      e.pairwise_label ? json(std::string(to_string(*e.pairwise_label))) : json(nullptr)},
                     {"harmony_magnitude", opt(e.harmony_magnitude)},
                     {"conflict_magnitude", opt(e.conflict_magnitude)},
                     {"sequence", e.sequence}});
  }
  json inferred = json::array();
  for (const auto& e : r.inferred) {
    inferred.push_back({{"i", e.i},
                        {"j", e.j},
                        {"label", std::string(to_string(e.label))},
                        {"witness", names(e.witness)}});
  }
  json contradictions = json::array();
  for (const auto& c : r.contradictions) {
    contradictions.push_back({{"i", c.i},
                              {"j", c.j},
                              {"measured", std::string(to_string(c.measured))},
                              {"implied", std::string(to_string(c.implied))},
                              {"witness", names(c.witness)}});
  }
  doc["graph"] = {{"edges", std::move(edges)},
                  {"inferred", std::move(inferred)},
                  {"contradictions", std::move(contradictions)}};

  json red = json::array();
  for (const auto& x : r.redundancy) red.push_back({{"redundant", x.redundant}, {"witness", x.witness}});
  doc["redundancy"] = std::move(red);

  json subs = json::array();
  for (const auto& s : r.subproblems) {
    subs.push_back({{"constraints", names(s.constraints)}, {"variables", names(s.variables)}});
  }
  doc["decomposition"] = {{"subproblems", std::move(subs)}, {"unconstrained", names(r.unconstrained)}};
  doc["notes"] = names(r.notes);
  return doc;
}

// ---------------------------------------------------------------------------
// Parsing

const json& get(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw InputError(where + ": expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw InputError(where + "." + key + ": missing");
  return *it;
}

std::string str(const json& obj, const char* key, const std::string& where) {
  const json& v = get(obj, key, where);
  if (!v.is_string()) throw InputError(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

double num(const json& obj, const char* key, const std::string& where) {
  const json& v = get(obj, key, where);
  if (!v.is_number()) throw InputError(where + "." + key + ": expected a number");
  return v.get<double>();
}

std::uint64_t count(const json& obj, const char* key, const std::string& where) {
  const json& v = get(obj, key, where);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw InputError(where + "." + key + ": expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

bool boolean(const json& obj, const char* key, const std::string& where) {
  const json& v = get(obj, key, where);
  if (!v.is_boolean()) throw InputError(where + "." + key + ": expected true or false");
  return v.get<bool>();
}

std::optional<double> opt_num(const json& obj, const char* key, const std::string& where) {
  const json& v = get(obj, key, where);
  if (v.is_null()) return std::nullopt;
  if (!v.is_number()) throw InputError(where + "." + key + ": expected a number or null");
  return v.get<double>();
}

std::vector<std::string> str_list(const json& obj, const char* key, const std::string& where) {
  const json& v = get(obj, key, where);
  if (!v.is_array()) throw InputError(where + "." + key + ": expected an array");
  std::vector<std::string> out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!v[k].is_string()) {
      throw InputError(where + "." + key + "[" + std::to_string(k) + "]: expected a string");
    }
    out.push_back(v[k].get<std::string>());
  }
  return out;
}

const json& array(const json& obj, const char* key, const std::string& where) {
  const json& v = get(obj, key, where);
  if (!v.is_array()) throw InputError(where + "." + key + ": expected an array");
  return v;
}

std::string at(const std::string& where, const char* key, std::size_t k) {
  return where + "." + key + "[" + std::to_string(k) + "]";
}

// Wraps enum parsers so errors carry the field path.
template <typename F>
auto convert(F&& f, const std::string& field) -> decltype(f()) {
  try {
    return f();
  } catch (const InputError& e) {
    throw InputError(field + ": " + e.what());
  }
}

ConstraintKind kind_from_string(const std::string& s) {
  if (s == "inequality") return ConstraintKind::Inequality;
  if (s == "equality") return ConstraintKind::Equality;
  throw InputError("unknown constraint kind '" + s + "'");
}

AnalysisReport from_json(const json& doc) {
  AnalysisReport r;
  const std::string root = "report";
  if (!doc.is_object()) throw InputError("report: expected a JSON object");
  const json& sv = get(doc, "schema_version", root);
  if (!sv.is_number_integer()) throw InputError("report.schema_version: expected an integer");
  r.schema_version = sv.get<int>();
  if (r.schema_version != kReportSchemaVersion) {
    throw InputError("report.schema_version: unsupported version " + std::to_string(r.schema_version));
  }
  r.tool_version = str(get(doc, "tool", root), "version", root + ".tool");

  const json& problem = get(doc, "problem", root);
  const std::string pw = root + ".problem";
  r.problem_name = str(problem, "name", pw);
  if (const json& o = get(problem, "objective", pw); !o.is_null()) {
    if (!o.is_string()) throw InputError(pw + ".objective: expected a string or null");
    r.objective = o.get<std::string>();
  }
  const json& vars = array(problem, "variables", pw);
  for (std::size_t k = 0; k < vars.size(); ++k) {
    const std::string w = at(pw, "variables", k);
    r.variables.push_back({str(vars[k], "name", w), num(vars[k], "lower", w), num(vars[k], "upper", w)});
  }
  const json& cons = array(problem, "constraints", pw);
  for (std::size_t k = 0; k < cons.size(); ++k) {
    const std::string w = at(pw, "constraints", k);
    ReportConstraint c;
    c.name = str(cons[k], "name", w);
    const std::string kind = str(cons[k], "kind", w);
    c.kind = convert([&] { return kind_from_string(kind); }, w + ".kind");
    c.expr = str(cons[k], "expr", w);
    c.syntactic_support = str_list(cons[k], "syntactic_support", w);
    c.effective_support = str_list(cons[k], "effective_support", w);
    r.constraints.push_back(std::move(c));
  }

  const json& params = get(doc, "parameters", root);
  const std::string prw = root + ".parameters";
  auto& p = r.parameters;
  p.samples = count(params, "samples", prw);
  p.seed = count(params, "seed", prw);
  const std::string strategy = str(params, "strategy", prw);
  p.strategy = convert([&] { return sampling_strategy_from_string(strategy); }, prw + ".strategy");
  p.eps_tie = num(params, "eps_tie", prw);
  p.eps_feas = num(params, "eps_feas", prw);
  p.probe_fraction = num(params, "probe_fraction", prw);
  p.eps_value = num(params, "eps_value", prw);
  const std::string mode = str(params, "gradient_mode", prw);
  p.gradient_mode = convert([&] { return gradient_mode_from_string(mode); }, prw + ".gradient_mode");
  p.gradient_step = num(params, "gradient_step", prw);

  const json& pairs = array(doc, "pairs", root);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const std::string w = at(root, "pairs", k);
    const json& e = pairs[k];
    ReportPair q;
    q.i = str(e, "i", w);
    q.j = str(e, "j", w);
    const std::string label = str(e, "label", w);
    q.label = convert([&] { return pair_label_from_string(label); }, w + ".label");
    q.evidence.harmony_pairs = count(e, "harmony_pairs", w);
    q.evidence.conflict_pairs = count(e, "conflict_pairs", w);
    q.evidence.tie_pairs = count(e, "tie_pairs", w);
    q.evidence.total_pairs = count(e, "total_pairs", w);
    q.harmony_magnitude = opt_num(e, "harmony_magnitude", w);
    q.conflict_magnitude = opt_num(e, "conflict_magnitude", w);
    q.crossing_count = count(e, "crossing_count", w);
    q.samples = count(e, "samples", w);
    q.seed = count(e, "seed", w);
    r.pairs.push_back(std::move(q));
  }

  const json& ind = array(doc, "independence", root);
  for (std::size_t k = 0; k < ind.size(); ++k) {
    const std::string w = at(root, "independence", k);
    r.independence.push_back({str(ind[k], "i", w), str(ind[k], "j", w),
                              boolean(ind[k], "syntactic_independent", w),
                              boolean(ind[k], "effective_independent", w)});
  }

  const json& grads = array(doc, "gradients", root);
  for (std::size_t k = 0; k < grads.size(); ++k) {
    const std::string w = at(root, "gradients", k);
    const json& e = grads[k];
    ReportGradient g;
    g.i = str(e, "i", w);
    g.j = str(e, "j", w);
    g.aggregate.mean_harmony = opt_num(e, "mean_harmony", w);
    g.aggregate.mean_conflict = opt_num(e, "mean_conflict", w);
    g.aggregate.evaluated_points = count(e, "evaluated_points", w);
    g.aggregate.zero_gradient_points = count(e, "zero_gradient_points", w);
    g.aggregate.antiparallel_points = count(e, "antiparallel_points", w);
    g.aggregate.boundary_points = count(e, "boundary_points", w);
    r.gradients.push_back(std::move(g));
  }

  const json& graph = get(doc, "graph", root);
  const std::string gw = root + ".graph";
  const json& edges = array(graph, "edges", gw);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const std::string w = at(gw, "edges", k);
    const json& e = edges[k];
    ReportEdge x;
    x.i = str(e, "i", w);
    x.j = str(e, "j", w);
    const std::string label = str(e, "label", w);
    x.label = convert([&] { return edge_label_from_string(label); }, w + ".label");
    const std::string prov = str(e, "provenance", w);
    x.provenance = convert([&] { return provenance_from_string(prov); }, w + ".provenance");
    if (const json& pl = get(e, "pairwise_label", w); !pl.is_null()) {
      if (!pl.is_string()) throw InputError(w + ".pairwise_label: expected a string or null");
      const std::string s = pl.get<std::string>();
      x.pairwise_label = convert([&] { return pair_label_from_string(s); }, w + ".pairwise_label");
    }
    x.harmony_magnitude = opt_num(e, "harmony_magnitude", w);
    x.conflict_magnitude = opt_num(e, "conflict_magnitude", w);
    x.sequence = count(e, "sequence", w);
    r.edges.push_back(std::move(x));
  }
  const json& inferred = array(graph, "inferred", gw);
  for (std::size_t k = 0; k < inferred.size(); ++k) {
    const std::string w = at(gw, "inferred", k);
    const json& e = inferred[k];
    ReportInferred x;
    x.i = str(e, "i", w);
    x.j = str(e, "j", w);
    const std::string label = str(e, "label", w);
    x.label = convert([&] { return edge_label_from_string(label); }, w + ".label");
    x.witness = str_list(e, "witness", w);
    r.inferred.push_back(std::move(x));
  }
  const json& contradictions = array(graph, "contradictions", gw);
  for (std::size_t k = 0; k < contradictions.size(); ++k) {
    const std::string w = at(gw, "contradictions", k);
    const json& e = contradictions[k];
    ReportContradiction x;
    x.i = str(e, "i", w);
    x.j = str(e, "j", w);
    const std::string measured = str(e, "measured", w);
    x.measured = convert([&] { return edge_label_from_string(measured); }, w + ".measured");
    const std::string implied = str(e, "implied", w);
    x.implied = convert([&] { return edge_label_from_string(implied); }, w + ".implied");
    x.witness = str_list(e, "witness", w);
    r.contradictions.push_back(std::move(x));
  }

  const json& red = array(doc, "redundancy", root);
  for (std::size_t k = 0; k < red.size(); ++k) {
    const std::string w = at(root, "redundancy", k);
    r.redundancy.push_back({str(red[k], "redundant", w), str(red[k], "witness", w)});
  }

  const json& dec = get(doc, "decomposition", root);
  const std::string dw = root + ".decomposition";
  const json& subs = array(dec, "subproblems", dw);
  for (std::size_t k = 0; k < subs.size(); ++k) {
    const std::string w = at(dw, "subproblems", k);
    r.subproblems.push_back({str_list(subs[k], "constraints", w), str_list(subs[k], "variables", w)});
  }
  r.unconstrained = str_list(dec, "unconstrained", dw);
  r.notes = str_list(doc, "notes", root);
  return r;
}

std::size_t index_of(const Problem& problem, const std::string& name, const std::string& where) {
  const auto k = problem.constraint_index(name);
  if (!k) throw InputError(where + ": unknown constraint '" + name + "'");
  return *k;
}

}  // namespace

std::string report_to_json(const AnalysisReport& report) {
  std::string out;
  write_value(out, to_json(report), 0);
  out += '\n';
  return out;
}

AnalysisReport report_from_json(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("report: invalid JSON: ") + e.what());
  }
  return from_json(doc);
}

AnalysisReport load_report_file(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return report_from_json(text);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

Problem problem_from_report(const AnalysisReport& report) {
  std::vector<VariableSpec> vars;
  for (const auto& v : report.variables) vars.push_back({v.name, v.lower, v.upper});
  std::vector<Constraint> cons;
  for (std::size_t k = 0; k < report.constraints.size(); ++k) {
    const auto& c = report.constraints[k];
    try {
      cons.push_back({c.name, c.kind, expr::parse(c.expr)});
    } catch (const InputError& e) {
      throw InputError("report.problem.constraints[" + std::to_string(k) + "].expr: " + e.what());
    }
  }
  std::optional<expr::Expr> objective;
  if (report.objective) {
    try {
      objective = expr::parse(*report.objective);
    } catch (const InputError& e) {
      throw InputError(std::string("report.problem.objective: ") + e.what());
    }
  }
  return Problem(report.problem_name, std::move(vars), std::move(cons), std::move(objective));
}

RelationshipGraph graph_from_report(const AnalysisReport& report) {
  const Problem problem = problem_from_report(report);
  RelationshipGraph graph(problem.constraint_count());
  std::vector<const ReportEdge*> order;
  for (const auto& e : report.edges) order.push_back(&e);
  std::stable_sort(order.begin(), order.end(),
                   [](const ReportEdge* a, const ReportEdge* b) { return a->sequence < b->sequence; });
  for (std::size_t k = 0; k < order.size(); ++k) {
    const ReportEdge& e = *order[k];
    const std::string w = "report.graph.edges";
    if (e.provenance != Provenance::Measured) continue;
    Edge edge;
    edge.label = e.label;
    edge.pairwise_label = e.pairwise_label;
    edge.harmony_magnitude = e.harmony_magnitude;
    edge.conflict_magnitude = e.conflict_magnitude;
    graph.add_measured(index_of(problem, e.i, w), index_of(problem, e.j, w), std::move(edge));
  }
  return graph;
}

void set_inference(AnalysisReport& report, const InferenceResult& result) {
  auto name = [&](std::size_t k) -> const std::string& { return report.constraints.at(k).name; };
  auto path = [&](const std::vector<std::size_t>& w) {
    std::vector<std::string> out;
    for (const auto k : w) out.push_back(name(k));
    return out;
  };
  report.inferred.clear();
  report.contradictions.clear();
  for (const auto& e : result.inferred) {
    report.inferred.push_back({name(e.i), name(e.j), e.label, path(e.witness)});
  }
  for (const auto& c : result.contradictions) {
    report.contradictions.push_back({name(c.i), name(c.j), c.measured, c.implied, path(c.witness)});
  }
}

std::string matrix_csv(const RelationshipGraph& graph) {
  const std::size_t m = graph.node_count();
  std::string out;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (j) out += ',';
      if (i == j) {
        out += "\xE2\x80\x94";
        continue;
      }
      const Edge& e = graph.edge(i, j);
      std::string cell(abbreviation(e.label));
      const bool dominance = e.label == EdgeLabel::TotalHarmony || e.label == EdgeLabel::TotalConflict ||
                             e.label == EdgeLabel::Mixed || e.label == EdgeLabel::Degenerate;
      if (dominance && e.conflict_magnitude) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4f", *e.conflict_magnitude);
        out += '"' + cell + ',' + buf + '"';
      } else {
        out += cell;
      }
    }
    out += '\n';
  }
  return out;
}

void write_text_file(const std::string& path, std::string_view contents) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw InputError(path + ": cannot open for writing");
  os.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  os.close();
  if (!os) throw InputError(path + ": write failed");
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InputError(path + ": cannot open for reading");
  return std::string(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>());
}

}  // namespace conrel
