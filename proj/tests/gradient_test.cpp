#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "conrel/error.hpp"
#include "conrel/generator.hpp"
#include "conrel/gradient.hpp"
#include "oracles.hpp"

using conrel::GradientMode;

namespace {

conrel::Problem single(const char* source) {
  return conrel::Problem("one", {{"x1", -3, 3}, {"x2", -3, 3}},
                         {{"c", conrel::ConstraintKind::Inequality, conrel::expr::parse(source)}});
}

const double kQuarter = std::cos(std::numbers::pi / 4);

}  // namespace

TEST(Gradient, Examples) {
  const std::vector<double> x{0.5, 3.0};
  const auto g = conrel::gradient(single("x2^2-1"), 0, x);
  EXPECT_EQ(g, (std::vector<double>{0.0, 6.0}));

  const auto p = single("2*sin(x1)-1");
  for (const double x1 : {-2.0, 0.0, 1.3}) {
    const std::vector<double> pt{x1, 0.4};
    const auto s = conrel::gradient(p, 0, pt);
    EXPECT_NEAR(s[0], 2 * std::cos(x1), 1e-15);
    EXPECT_EQ(s[1], 0.0);
    const auto fd = conrel::gradient(p, 0, pt, GradientMode::CentralDifference);
    EXPECT_TRUE(oracle::close_rel(fd[0], 2 * std::cos(x1), 1e-6));
  }

  const std::vector<double> y{1.0, 1.0};
  EXPECT_EQ(conrel::gradient(single("0-1"), 0, y), (std::vector<double>{0.0, 0.0}));
}

TEST(Gradient, CentralDifferenceStencilMustFitInsideBounds) {
  const std::vector<double> edge{3.0, 0.0};
  EXPECT_THROW((void)conrel::gradient(single("x1"), 0, edge, GradientMode::CentralDifference), conrel::InputError);
  EXPECT_NO_THROW((void)conrel::gradient(single("x1"), 0, edge, GradientMode::Symbolic));
}

TEST(Gradient, SymbolicAgreesWithCentralDifference) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.9, 2.9);
  for (const auto& p : conrel::paper_suite()) {
    for (int k = 0; k < 100; ++k) {
      const std::vector<double> x{u(rng), u(rng)};
      for (std::size_t j = 0; j < 2; ++j) {
        const auto s = conrel::gradient(p, j, x);
        const auto fd = conrel::gradient(p, j, x, GradientMode::CentralDifference);
        for (std::size_t d = 0; d < 2; ++d) {
          EXPECT_TRUE(oracle::close_rel(s[d], fd[d], 1e-6, 1e-9))
              << p.name() << " constraint " << j << " component " << d << ": " << s[d] << " vs " << fd[d];
        }
      }
    }
  }
}

TEST(AngleDecomposition, Examples) {
  const auto same = conrel::angle_decomposition(std::vector<double>{1, 0}, std::vector<double>{2, 0});
  EXPECT_EQ(same.angle, 0.0);
  EXPECT_EQ(same.harmony_magnitude, 1.0);
  EXPECT_EQ(same.conflict_magnitude, 0.0);

  const auto opposite = conrel::angle_decomposition(std::vector<double>{1, 0}, std::vector<double>{-3, 0});
  EXPECT_TRUE(opposite.degenerate);
  EXPECT_FALSE(opposite.zero_gradient);
  EXPECT_EQ(opposite.conflict_magnitude, 1.0);
  EXPECT_EQ(opposite.harmony_magnitude, 0.0);

  const auto right = conrel::angle_decomposition(std::vector<double>{1, 0}, std::vector<double>{0, 1});
  EXPECT_NEAR(right.angle, std::numbers::pi / 2, 1e-15);
  EXPECT_NEAR(*right.harmony_magnitude, kQuarter, 1e-15);
  EXPECT_NEAR(*right.conflict_magnitude, kQuarter, 1e-15);

  const auto zero = conrel::angle_decomposition(std::vector<double>{0, 0}, std::vector<double>{0, 1});
  EXPECT_TRUE(zero.zero_gradient);
  EXPECT_FALSE(zero.harmony_magnitude.has_value());
}

TEST(AngleDecomposition, ScaleInvariantAndSymmetric) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1, 1);
  std::uniform_real_distribution<double> scale(0.01, 100);
  for (int k = 0; k < 200; ++k) {
    const std::vector<double> a{u(rng), u(rng), u(rng)};
    const std::vector<double> b{u(rng), u(rng), u(rng)};
    const double s = scale(rng);
    const std::vector<double> as{a[0] * s, a[1] * s, a[2] * s};
    const auto d = conrel::angle_decomposition(a, b);
    const auto ds = conrel::angle_decomposition(as, b);
    const auto swapped = conrel::angle_decomposition(b, a);
    EXPECT_NEAR(d.angle, ds.angle, 1e-12);
    EXPECT_NEAR(*d.harmony_magnitude, *ds.harmony_magnitude, 1e-12);
    EXPECT_EQ(d.angle, swapped.angle);
    EXPECT_EQ(d.conflict_magnitude, swapped.conflict_magnitude);
    // independent check of the half-angle identities
    const double dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    const double theta = std::acos(dot / std::hypot(a[0], a[1], a[2]) / std::hypot(b[0], b[1], b[2]));
    EXPECT_NEAR(d.angle, theta, 1e-7);
    EXPECT_NEAR(*d.harmony_magnitude, std::cos(theta / 2), 1e-7);
  }
}

TEST(AngleDecomposition, HarmonyDecreasesWithAngle) {
  double previous = 2.0;
  for (int k = 0; k < 100; ++k) {
    const double theta = std::numbers::pi * k / 100.0;
    const auto d = conrel::angle_decomposition(std::vector<double>{1, 0},
                                               std::vector<double>{std::cos(theta), std::sin(theta)});
    EXPECT_LE(*d.harmony_magnitude, previous + 1e-15);
    previous = *d.harmony_magnitude;
  }
}

TEST(GradientRelationship, ReferencePairs) {
  const auto conflict = conrel::paper_problem("conflict");
  const auto c = conrel::gradient_relationship(conflict, 0, 1, conrel::sample(conflict, 200, 42));
  EXPECT_NEAR(*c.mean_conflict, 1.0, 1e-9);
  EXPECT_EQ(c.zero_gradient_points, 0u);

  const auto harmony = conrel::paper_problem("harmony");
  const auto h = conrel::gradient_relationship(harmony, 0, 1, conrel::sample(harmony, 200, 42));
  EXPECT_NEAR(*h.mean_harmony, 1.0, 1e-9);

  const auto independence = conrel::paper_problem("independence");
  const auto i = conrel::gradient_relationship(independence, 0, 1, conrel::sample(independence, 200, 42));
  EXPECT_NEAR(*i.mean_harmony, kQuarter, 1e-9);
  EXPECT_NEAR(*i.mean_conflict, kQuarter, 1e-9);
}

TEST(GradientRelationship, ZeroGradientPointsAreCountedNotAveraged) {
  // x2^2-1 has a zero gradient on the x2 = 0 grid line
  const auto p = conrel::Problem("z", {{"x1", -1, 1}, {"x2", -1, 1}},
                                 {{"a", conrel::ConstraintKind::Inequality, conrel::expr::parse("x1")},
                                  {"b", conrel::ConstraintKind::Inequality, conrel::expr::parse("x2^2-1")}});
  const auto s = conrel::sample(p, 9, 0, conrel::SamplingStrategy::Grid);
  const auto g = conrel::gradient_relationship(p, 0, 1, s);
  EXPECT_EQ(g.evaluated_points, 9u);
  EXPECT_EQ(g.zero_gradient_points, 3u);
  EXPECT_NEAR(*g.mean_harmony, kQuarter, 1e-12);
}

TEST(GradientRelationship, CentralDifferenceSkipsBoundaryPoints) {
  const auto p = conrel::paper_problem("harmony");
  const auto s = conrel::sample(p, 9, 0, conrel::SamplingStrategy::Grid);
  const auto g = conrel::gradient_relationship(p, 0, 1, s, GradientMode::CentralDifference);
  EXPECT_EQ(g.boundary_points, 8u);
  EXPECT_EQ(g.evaluated_points, 1u);
  EXPECT_NEAR(*g.mean_harmony, 1.0, 1e-9);
}

TEST(GradientRelationship, TableMatchesDirectComputation) {
  const auto p = conrel::paper_merged();
  const auto s = conrel::sample(p, 50, 1);
  const conrel::GradientTable table(p);
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = i + 1; j < 6; ++j) {
      EXPECT_EQ(conrel::gradient_relationship(table, i, j, s), conrel::gradient_relationship(p, i, j, s));
    }
  }
}
