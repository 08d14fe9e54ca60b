#include "sirpinn/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sirpinn/errors.hpp"

namespace sirpinn {

namespace {

constexpr int kMarginLeft = 64;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 48;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b"};

std::string esc(const std::string& s) {
  std::string out;
  out.reserve(s.size());
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

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// round limits outward to one significant decimal step for tidy axes
void nice_limits(double& lo, double& hi) {
  if (lo == hi) {
    lo -= 1.0;
    hi += 1.0;
    return;
  }
  const double span = hi - lo;
  const double step = std::pow(10.0, std::floor(std::log10(span)) - 1.0);
  lo = std::floor(lo / step) * step;
  hi = std::ceil(hi / step) * step;
}

}  // namespace

std::vector<std::string> write_svg_plot(
    const std::string& path, const std::vector<PlotSeries>& series,
    const std::vector<PlotAnnotation>& annotations, const PlotOptions& opts) {
  if (series.empty()) throw InputError("svg plot: no series");
  for (const PlotSeries& s : series) {
    if (s.x.empty()) throw InputError("svg plot: empty series '" + s.label + "'");
    if (s.x.size() != s.y.size())
      throw InputError("svg plot: ragged series '" + s.label + "'");
  }

  double x_lo = series[0].x.front(), x_hi = x_lo;
  double y_lo = series[0].y.front(), y_hi = y_lo;
  for (const PlotSeries& s : series) {
    for (const double v : s.x) {
      x_lo = std::min(x_lo, v);
      x_hi = std::max(x_hi, v);
    }
    for (const double v : s.y) {
      y_lo = std::min(y_lo, v);
      y_hi = std::max(y_hi, v);
    }
  }
  if (opts.ref_y) {
    y_lo = std::min(y_lo, *opts.ref_y);
    y_hi = std::max(y_hi, *opts.ref_y);
  }
  nice_limits(y_lo, y_hi);
  if (x_lo == x_hi) {
    x_lo -= 0.5;
    x_hi += 0.5;
  }

  const double pw = opts.width - kMarginLeft - kMarginRight;
  const double ph = opts.height - kMarginTop - kMarginBottom;
  auto sx = [&](double x) {
    return kMarginLeft + (x - x_lo) / (x_hi - x_lo) * pw;
  };
  auto sy = [&](double y) {
    return kMarginTop + (1.0 - (y - y_lo) / (y_hi - y_lo)) * ph;
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.width
      << "\" height=\"" << opts.height << "\" viewBox=\"0 0 " << opts.width
      << " " << opts.height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!opts.title.empty())
    svg << "<text x=\"" << opts.width / 2 << "\" y=\"24\" font-size=\"16\" "
           "text-anchor=\"middle\" font-family=\"sans-serif\">"
        << esc(opts.title) << "</text>\n";

  // frame and ticks
  svg << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\""
      << num(pw) << "\" height=\"" << num(ph)
      << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = x_lo + (x_hi - x_lo) * i / 4.0;
    const double fy = y_lo + (y_hi - y_lo) * i / 4.0;
    svg << "<text x=\"" << num(sx(fx)) << "\" y=\"" << opts.height - 28
        << "\" font-size=\"11\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\">"
        << num(fx) << "</text>\n";
    svg << "<text x=\"" << kMarginLeft - 6 << "\" y=\"" << num(sy(fy) + 4)
        << "\" font-size=\"11\" text-anchor=\"end\" "
           "font-family=\"sans-serif\">"
        << num(fy) << "</text>\n";
    svg << "<line x1=\"" << kMarginLeft << "\" y1=\"" << num(sy(fy))
        << "\" x2=\"" << num(kMarginLeft + pw) << "\" y2=\"" << num(sy(fy))
        << "\" stroke=\"#ddd\"/>\n";
  }
  if (!opts.x_label.empty())
    svg << "<text x=\"" << opts.width / 2 << "\" y=\"" << opts.height - 8
        << "\" font-size=\"12\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\">"
        << esc(opts.x_label) << "</text>\n";
  if (!opts.y_label.empty())
    svg << "<text x=\"14\" y=\"" << opts.height / 2
        << "\" font-size=\"12\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" transform=\"rotate(-90 14 "
        << opts.height / 2 << ")\">" << esc(opts.y_label) << "</text>\n";

  if (opts.ref_y)
    svg << "<line x1=\"" << kMarginLeft << "\" y1=\"" << num(sy(*opts.ref_y))
        << "\" x2=\"" << num(kMarginLeft + pw) << "\" y2=\""
        << num(sy(*opts.ref_y))
        << "\" stroke=\"#888\" stroke-dasharray=\"6 4\"/>\n";

  std::vector<std::string> warnings;
  for (const PlotAnnotation& a : annotations) {
    if (a.x < x_lo || a.x > x_hi) {
      warnings.push_back("annotation '" + a.label + "' at x=" + num(a.x) +
                         " outside the plotted range; skipped");
      continue;
    }
    svg << "<line x1=\"" << num(sx(a.x)) << "\" y1=\"" << kMarginTop
        << "\" x2=\"" << num(sx(a.x)) << "\" y2=\"" << num(kMarginTop + ph)
        << "\" stroke=\"#aa2222\" stroke-dasharray=\"2 3\"/>\n";
    svg << "<text x=\"" << num(sx(a.x) + 4) << "\" y=\"" << kMarginTop + 12
        << "\" font-size=\"11\" font-family=\"sans-serif\" fill=\"#aa2222\">"
        << esc(a.label) << "</text>\n";
  }

  for (std::size_t si = 0; si < series.size(); ++si) {
    const PlotSeries& s = series[si];
    svg << "<polyline fill=\"none\" stroke=\""
        << kPalette[si % (sizeof kPalette / sizeof *kPalette)]
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      if (k) svg << ' ';
      svg << num(sx(s.x[k])) << ',' << num(sy(s.y[k]));
    }
    svg << "\"/>\n";
    if (!s.label.empty())
      svg << "<text x=\"" << kMarginLeft + 8 << "\" y=\""
          << kMarginTop + 16 + 14 * static_cast<int>(si)
          << "\" font-size=\"12\" font-family=\"sans-serif\" fill=\""
          << kPalette[si % (sizeof kPalette / sizeof *kPalette)] << "\">"
          << esc(s.label) << "</text>\n";
  }
  svg << "</svg>\n";

  std::ofstream out(path);
  if (!out) throw IoError("cannot write SVG '" + path + "'");
  out << svg.str();
  if (!out) throw IoError("failed writing SVG '" + path + "'");
  return warnings;
}

std::vector<std::string> emit_plot(const RtSeries& series,
                                   const std::vector<PlotAnnotation>& annotations,
                                   const std::string& path,
                                   const std::string& title) {
  if (series.rt.empty()) throw InputError("svg plot: empty Rt series");
  PlotOptions opts;
  opts.title = title;
  opts.y_label = "Rt";
  opts.ref_y = 1.0;
  return write_svg_plot(path, {{"Rt", series.t, series.rt}}, annotations, opts);
}

std::vector<std::string> emit_plot(const CompartmentSeries& series,
                                   const std::vector<PlotAnnotation>& annotations,
                                   const std::string& path,
                                   const std::string& title) {
  if (series.size() == 0) throw InputError("svg plot: empty series");
  PlotOptions opts;
  opts.title = title;
  opts.y_label = "count";
  return write_svg_plot(path,
                        {{"S", series.t, series.S},
                         {"I", series.t, series.I},
                         {"R", series.t, series.R}},
                        annotations, opts);
}

}  // namespace sirpinn
