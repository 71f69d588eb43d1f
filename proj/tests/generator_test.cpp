#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <json.hpp>

#include "conrel/analysis.hpp"
#include "conrel/error.hpp"
#include "conrel/generator.hpp"
#include "conrel/graph.hpp"

using conrel::AffinePlan;
using conrel::EdgeLabel;

namespace {

// Relabels the analysis result per pair, by index.
std::map<conrel::PairKey, EdgeLabel> recovered(const conrel::PlantedProblem& planted, std::size_t samples,
                                               std::uint64_t seed) {
  conrel::AnalysisOptions o;
  o.samples = samples;
  o.seed = seed;
  const auto report = conrel::analyze(planted.problem, o);
  std::map<conrel::PairKey, EdgeLabel> out;
  for (const auto& e : report.edges) {
    out[{*planted.problem.constraint_index(e.i), *planted.problem.constraint_index(e.j)}] = e.label;
  }
  return out;
}

}  // namespace

TEST(ReferenceSuite, Shapes) {
  const auto suite = conrel::paper_suite();
  ASSERT_EQ(suite.size(), 3u);
  EXPECT_EQ(suite[0].name(), "paper-conflict");
  EXPECT_EQ(suite[0].constraint_count(), 2u);
  EXPECT_EQ(suite[0].dimension(), 2u);
  for (const auto& c : suite[0].constraints()) EXPECT_EQ(c.kind, conrel::ConstraintKind::Inequality);
  EXPECT_TRUE(conrel::disjoint(conrel::expr::syntactic_support(suite[2].constraint(0).expr),
                               conrel::expr::syntactic_support(suite[2].constraint(1).expr)));
}

TEST(ReferenceSuite, FiniteAcrossTheBox) {
  const auto merged = conrel::paper_merged();
  EXPECT_NO_THROW((void)conrel::sample(merged, 49 * 49, 0, conrel::SamplingStrategy::Grid));
}

TEST(ReferenceSuite, UnknownKey) { EXPECT_THROW((void)conrel::paper_problem("nope"), conrel::InputError); }

TEST(AffinePlanParse, Forms) {
  EXPECT_TRUE(AffinePlan::parse("random").random);
  const auto all = AffinePlan::parse("TC");
  EXPECT_FALSE(all.random);
  EXPECT_EQ(all.all, EdgeLabel::TotalConflict);
  const auto list = AffinePlan::parse("1-2:TH, 3-2:TC,1-4:IND");
  EXPECT_EQ(list.labels.at({0, 1}), EdgeLabel::TotalHarmony);
  EXPECT_EQ(list.labels.at({1, 2}), EdgeLabel::TotalConflict);
  EXPECT_EQ(list.labels.at({0, 3}), EdgeLabel::Independent);
  EXPECT_THROW((void)AffinePlan::parse("1-1:TH"), conrel::InputError);
  EXPECT_THROW((void)AffinePlan::parse("0-1:TH"), conrel::InputError);
  EXPECT_THROW((void)AffinePlan::parse("1-2:MX"), conrel::InputError);
  EXPECT_THROW((void)AffinePlan::parse("1-2:TH,1-2:TC"), conrel::InputError);
  EXPECT_THROW((void)AffinePlan::parse("12TH"), conrel::InputError);
}

TEST(GenerateAffine, SingleLabelPlans) {
  const auto th = conrel::generate_affine(2, 2, 1, AffinePlan::parse("TH"));
  EXPECT_EQ(th.planted_labels.at({0, 1}), EdgeLabel::TotalHarmony);
  EXPECT_EQ(recovered(th, 100, 1).at({0, 1}), EdgeLabel::TotalHarmony);

  const auto tc = conrel::generate_affine(2, 2, 1, AffinePlan::parse("TC"));
  EXPECT_EQ(recovered(tc, 100, 1).at({0, 1}), EdgeLabel::TotalConflict);

  const auto ind = conrel::generate_affine(4, 2, 1, AffinePlan::parse("IND"));
  EXPECT_EQ(conrel::expr::syntactic_support(ind.problem.constraint(0).expr),
            (std::set<std::string>{"x1", "x2"}));
  EXPECT_EQ(conrel::expr::syntactic_support(ind.problem.constraint(1).expr),
            (std::set<std::string>{"x3", "x4"}));
  EXPECT_EQ(recovered(ind, 100, 1).at({0, 1}), EdgeLabel::Independent);
}

TEST(GenerateAffine, UnrealizablePlans) {
  EXPECT_THROW((void)conrel::generate_affine(2, 3, 1, AffinePlan::parse("1-2:TH,2-3:TH,1-3:TC")),
               conrel::InputError);
  EXPECT_THROW((void)conrel::generate_affine(2, 3, 1, AffinePlan::parse("1-2:TH,2-3:TH,1-3:IND")),
               conrel::InputError);
  EXPECT_THROW((void)conrel::generate_affine(2, 3, 1, AffinePlan::parse("IND")), conrel::InputError);
  EXPECT_THROW((void)conrel::generate_affine(1, 3, 1, AffinePlan{}), conrel::InputError);
  EXPECT_THROW((void)conrel::generate_affine(3, 1, 1, AffinePlan{}), conrel::InputError);
  EXPECT_THROW((void)conrel::generate_affine(3, 2, 1, AffinePlan::parse("1-3:TH")), conrel::InputError);
}

TEST(GenerateAffine, PlannedLabelsFollowThePlan) {
  const auto p = conrel::generate_affine(4, 5, 9, AffinePlan::parse("1-2:TH,2-3:TC,4-5:TH,1-4:IND"));
  EXPECT_EQ(p.planted_labels.at({0, 1}), EdgeLabel::TotalHarmony);
  EXPECT_EQ(p.planted_labels.at({1, 2}), EdgeLabel::TotalConflict);
  EXPECT_EQ(p.planted_labels.at({0, 2}), EdgeLabel::TotalConflict);
  EXPECT_EQ(p.planted_labels.at({3, 4}), EdgeLabel::TotalHarmony);
  EXPECT_EQ(p.planted_labels.at({0, 3}), EdgeLabel::Independent);
  EXPECT_EQ(p.planted_labels.size(), 10u);
}

TEST(GenerateAffine, DeterministicAndWithinCoefficientRanges) {
  const auto a = conrel::generate_affine(5, 6, 77, AffinePlan{});
  const auto b = conrel::generate_affine(5, 6, 77, AffinePlan{});
  EXPECT_EQ(conrel::problem_to_json(a.problem), conrel::problem_to_json(b.problem));
  EXPECT_EQ(a.planted_labels, b.planted_labels);
  for (const auto& v : a.problem.variables()) {
    EXPECT_EQ(v.lower, -5.0);
    EXPECT_EQ(v.upper, 5.0);
  }
  // the gradient of an affine constraint is its coefficient vector; offset is f(0)
  for (std::size_t j = 0; j < a.problem.constraint_count(); ++j) {
    const std::vector<double> origin(5, 0.0);
    EXPECT_LE(std::abs(conrel::constraint_value(a.problem, j, origin)), 1.0);
    const auto g = conrel::gradient(a.problem, j, origin);
    for (const double c : g) {
      if (c != 0.0) {
        EXPECT_GE(std::abs(c), 0.1);
        EXPECT_LE(std::abs(c), 1.0);
      }
    }
  }
}

TEST(GenerateAffine, PlantedLabelsAreRecoveredAndBalanced) {
  std::mt19937_64 rng(15);
  std::uniform_int_distribution<std::size_t> pick_n(2, 6), pick_m(2, 8);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = pick_n(rng), m = pick_m(rng);
    const std::uint64_t seed = rng();
    const auto planted = conrel::generate_affine(n, m, seed, AffinePlan{});
    EXPECT_EQ(recovered(planted, 50, seed ^ 0x5a5a), planted.planted_labels) << planted.problem.name();
    conrel::RelationshipGraph g(m);
    for (const auto& [key, label] : planted.planted_labels) g.add_measured(key.first, key.second, label);
    EXPECT_TRUE(conrel::infer_transitive(g).contradictions.empty());
  }
}

TEST(PlantedLabelsJson, Shape) {
  const auto p = conrel::generate_affine(2, 3, 7, AffinePlan::parse("TH"));
  const auto doc = nlohmann::json::parse(conrel::planted_labels_to_json(p));
  ASSERT_EQ(doc["pairs"].size(), 3u);
  EXPECT_EQ(doc["pairs"][0]["i"], "c1");
  EXPECT_EQ(doc["pairs"][0]["j"], "c2");
  EXPECT_EQ(doc["pairs"][0]["label"], "TOTAL_HARMONY");
}
