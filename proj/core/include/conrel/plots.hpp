#pragma once

#include <span>
#include <string>
#include <string_view>

namespace conrel {

/// Canvas geometry shared by both plots, in SVG user units.
struct PlotFrame {
  double width = 480.0;
  double height = 400.0;
  double left = 80.0;
  double right = 400.0;
  double top = 40.0;
  double bottom = 340.0;
};

/// Maps v from [lo, hi] onto [from, to]; a zero-width range maps to the
/// midpoint.
double scale_value(double v, double lo, double hi, double from, double to) noexcept;

/// Two vertical axes (i on the left, j on the right), each min-max scaled on
/// its own. Sample a becomes one <line class="sample"> joining its two axis
/// positions, so crossing lines mark conflicting sample pairs.
/// Throws InputError unless both inputs have the same length >= 2.
std::string parallel_coordinates_svg(std::span<const double> values_i, std::span<const double> values_j,
                                     std::string_view name_i, std::string_view name_j);

/// Scatter of (f_i, f_j), one <circle class="point"> per sample; f_i on the
/// horizontal axis. Throws InputError for mismatched or empty inputs.
std::string scatter_svg(std::span<const double> values_i, std::span<const double> values_j,
                        std::string_view name_i, std::string_view name_j);

void write_parallel_coordinates_svg(std::span<const double> values_i, std::span<const double> values_j,
                                    std::string_view name_i, std::string_view name_j,
                                    const std::string& path);

void write_scatter_svg(std::span<const double> values_i, std::span<const double> values_j,
                       std::string_view name_i, std::string_view name_j, const std::string& path);

}  // namespace conrel
