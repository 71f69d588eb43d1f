#include "conrel/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "conrel/error.hpp"
#include "conrel/report.hpp"

namespace conrel {

namespace {

std::string escape(std::string_view s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string fmt_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

void check(std::span<const double> a, std::span<const double> b, std::size_t min_size) {
  if (a.size() != b.size()) throw InputError("plot inputs must have the same length");
  if (a.size() < min_size) {
    throw InputError("plot needs at least " + std::to_string(min_size) + " sample(s)");
  }
  for (const double v : a) {
    if (!std::isfinite(v)) throw NumericalError("plot input contains a non-finite value");
  }
  for (const double v : b) {
    if (!std::isfinite(v)) throw NumericalError("plot input contains a non-finite value");
  }
}

std::string header(const PlotFrame& f, std::string_view title) {
  std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(f.width) + "\" height=\"" + fmt(f.height) +
       "\" viewBox=\"0 0 " + fmt(f.width) + " " + fmt(f.height) + "\">\n";
  s += "<title>" + escape(title) + "</title>\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + fmt(f.width) + "\" height=\"" + fmt(f.height) +
       "\" fill=\"white\"/>\n";
  return s;
}

std::string text(double x, double y, std::string_view anchor, std::string_view cls, std::string_view body) {
  return "<text class=\"" + std::string(cls) + "\" x=\"" + fmt(x) + "\" y=\"" + fmt(y) +
         "\" text-anchor=\"" + std::string(anchor) + "\" font-family=\"sans-serif\" font-size=\"12\">" +
         escape(body) + "</text>\n";
}

std::string axis(double x1, double y1, double x2, double y2) {
  return "<line class=\"axis\" x1=\"" + fmt(x1) + "\" y1=\"" + fmt(y1) + "\" x2=\"" + fmt(x2) + "\" y2=\"" +
         fmt(y2) + "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
}

}  // namespace

double scale_value(double v, double lo, double hi, double from, double to) noexcept {
  if (!(hi > lo)) return 0.5 * (from + to);
  return from + (v - lo) / (hi - lo) * (to - from);
}

std::string parallel_coordinates_svg(std::span<const double> values_i, std::span<const double> values_j,
                                     std::string_view name_i, std::string_view name_j) {
  check(values_i, values_j, 2);
  const PlotFrame f;
  const auto [lo_i, hi_i] = std::minmax_element(values_i.begin(), values_i.end());
  const auto [lo_j, hi_j] = std::minmax_element(values_j.begin(), values_j.end());

  std::string s = header(f, "parallel coordinates: " + std::string(name_i) + ", " + std::string(name_j));
  s += axis(f.left, f.top, f.left, f.bottom);
  s += axis(f.right, f.top, f.right, f.bottom);
  s += text(f.left, f.top - 16, "middle", "axis-label", name_i);
  s += text(f.right, f.top - 16, "middle", "axis-label", name_j);
  s += text(f.left - 6, f.top + 4, "end", "tick", fmt_label(*hi_i));
  s += text(f.left - 6, f.bottom + 4, "end", "tick", fmt_label(*lo_i));
  s += text(f.right + 6, f.top + 4, "start", "tick", fmt_label(*hi_j));
  s += text(f.right + 6, f.bottom + 4, "start", "tick", fmt_label(*lo_j));
  s += "<g class=\"samples\" stroke=\"steelblue\" stroke-width=\"1\" stroke-opacity=\"0.6\">\n";
  for (std::size_t a = 0; a < values_i.size(); ++a) {
    // larger values sit higher, i.e. at smaller y
    const double yi = scale_value(values_i[a], *lo_i, *hi_i, f.bottom, f.top);
    const double yj = scale_value(values_j[a], *lo_j, *hi_j, f.bottom, f.top);
    s += "<line class=\"sample\" x1=\"" + fmt(f.left) + "\" y1=\"" + fmt(yi) + "\" x2=\"" + fmt(f.right) +
         "\" y2=\"" + fmt(yj) + "\"/>\n";
  }
  s += "</g>\n</svg>\n";
  return s;
}

std::string scatter_svg(std::span<const double> values_i, std::span<const double> values_j,
                        std::string_view name_i, std::string_view name_j) {
  check(values_i, values_j, 1);
  const PlotFrame f;
  const auto [lo_i, hi_i] = std::minmax_element(values_i.begin(), values_i.end());
  const auto [lo_j, hi_j] = std::minmax_element(values_j.begin(), values_j.end());

  std::string s = header(f, "scatter: " + std::string(name_i) + ", " + std::string(name_j));
  s += axis(f.left, f.bottom, f.right, f.bottom);
  s += axis(f.left, f.top, f.left, f.bottom);
  s += text(0.5 * (f.left + f.right), f.bottom + 36, "middle", "axis-label", name_i);
  s += text(f.left - 40, 0.5 * (f.top + f.bottom), "middle", "axis-label", name_j);
  s += text(f.left, f.bottom + 16, "middle", "tick", fmt_label(*lo_i));
  s += text(f.right, f.bottom + 16, "middle", "tick", fmt_label(*hi_i));
  s += text(f.left - 6, f.bottom + 4, "end", "tick", fmt_label(*lo_j));
  s += text(f.left - 6, f.top + 4, "end", "tick", fmt_label(*hi_j));
  s += "<g class=\"points\" fill=\"steelblue\" fill-opacity=\"0.7\">\n";
  for (std::size_t a = 0; a < values_i.size(); ++a) {
    const double cx = scale_value(values_i[a], *lo_i, *hi_i, f.left, f.right);
    const double cy = scale_value(values_j[a], *lo_j, *hi_j, f.bottom, f.top);
    s += "<circle class=\"point\" cx=\"" + fmt(cx) + "\" cy=\"" + fmt(cy) + "\" r=\"3\"/>\n";
  }
  s += "</g>\n</svg>\n";
  return s;
}

void write_parallel_coordinates_svg(std::span<const double> values_i, std::span<const double> values_j,
                                    std::string_view name_i, std::string_view name_j,
                                    const std::string& path) {
  write_text_file(path, parallel_coordinates_svg(values_i, values_j, name_i, name_j));
}

void write_scatter_svg(std::span<const double> values_i, std::span<const double> values_j,
                       std::string_view name_i, std::string_view name_j, const std::string& path) {
  write_text_file(path, scatter_svg(values_i, values_j, name_i, name_j));
}

}  // namespace conrel
