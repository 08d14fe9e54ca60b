#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sirpinn/sir.hpp"

namespace sirpinn {

struct PlotSeries {
  std::string label;
  std::vector<double> x, y;
};

struct PlotAnnotation {
  double x = 0.0;
  std::string label;
};

struct PlotOptions {
  std::string title;
  std::string x_label = "day";
  std::string y_label;
  std::optional<double> ref_y;  // horizontal reference line (Rt = 1)
  int width = 900;
  int height = 480;
};

/// Hand-assembled single-panel SVG line chart; no renderer dependency.
/// Annotations outside the x range are skipped; one warning per skip is
/// returned. Throws InputError on empty input, IoError on write failure.
std::vector<std::string> write_svg_plot(
    const std::string& path, const std::vector<PlotSeries>& series,
    const std::vector<PlotAnnotation>& annotations, const PlotOptions& opts);

/// Rt chart with the Rt = 1 reference line.
std::vector<std::string> emit_plot(const RtSeries& series,
                                   const std::vector<PlotAnnotation>& annotations,
                                   const std::string& path,
                                   const std::string& title);

/// S/I/R chart (three lines).
std::vector<std::string> emit_plot(const CompartmentSeries& series,
                                   const std::vector<PlotAnnotation>& annotations,
                                   const std::string& path,
                                   const std::string& title);

}  // namespace sirpinn
