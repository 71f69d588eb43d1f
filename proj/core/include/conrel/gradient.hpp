#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "conrel/problem.hpp"

namespace conrel {

enum class GradientMode { Symbolic, CentralDifference };

std::string_view to_string(GradientMode mode);
/// Accepts "symbolic" and "fd" / "central-difference".
GradientMode gradient_mode_from_string(std::string_view s);

inline constexpr double kDefaultGradientStep = 1e-5;

/// Gradient of constraint j at `point`.
///
/// Symbolic mode differentiates the constraint expression. Central-difference
/// mode uses (f(x + h e_k) - f(x - h e_k)) / 2h and requires every coordinate
/// to sit at least `step` inside its bounds. Throws NumericalError for
/// non-finite derivatives and InputError for stencils leaving the box.
std::vector<double> gradient(const Problem& problem, std::size_t j, std::span<const double> point,
                             GradientMode mode = GradientMode::Symbolic,
                             double step = kDefaultGradientStep);

/// Harmony/conflict split of two gradient directions.
///
/// With unit gradients u and v meeting at angle theta, the component of
/// either vector along the bisector (u + v) / |u + v| has length cos(theta/2)
/// and the component perpendicular to it has length sin(theta/2).
struct GradientDecomposition {
  double angle = 0.0;
  std::optional<double> harmony_magnitude;
  std::optional<double> conflict_magnitude;
  /// Set for a zero gradient (magnitudes absent) and for antiparallel
  /// gradients (no bisector; harmony 0, conflict 1).
  bool degenerate = false;
  bool zero_gradient = false;
};

inline constexpr double kZeroNorm = 1e-12;

GradientDecomposition angle_decomposition(std::span<const double> gi, std::span<const double> gj);

struct GradientAggregate {
  std::optional<double> mean_harmony;
  std::optional<double> mean_conflict;
  /// Points where either gradient vanished; excluded from the means.
  std::size_t zero_gradient_points = 0;
  /// Points with exactly opposite gradients; included with conflict 1.
  std::size_t antiparallel_points = 0;
  /// Central-difference mode only: points whose stencil would leave the box.
  std::size_t boundary_points = 0;
  std::size_t evaluated_points = 0;

  friend bool operator==(const GradientAggregate&, const GradientAggregate&) = default;
};

/// Mean decomposition of constraints i and j over every sample point.
GradientAggregate gradient_relationship(const Problem& problem, std::size_t i, std::size_t j,
                                        const SampleSet& samples,
                                        GradientMode mode = GradientMode::Symbolic,
                                        double step = kDefaultGradientStep);

/// Precomputed symbolic partial derivatives of every constraint. Holds a
/// reference to `problem`, which must outlive the table.
class GradientTable {
 public:
  explicit GradientTable(const Problem& problem);

  std::vector<double> evaluate(std::size_t j, std::span<const double> point) const;
  const Problem& problem() const noexcept { return *problem_; }

 private:
  const Problem* problem_;
  std::vector<std::vector<expr::Expr>> partials_;
};

/// Symbolic-mode aggregate reusing precomputed partial derivatives.
GradientAggregate gradient_relationship(const GradientTable& table, std::size_t i, std::size_t j,
                                        const SampleSet& samples);

}  // namespace conrel
