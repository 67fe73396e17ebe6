#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "symaccel/integrators.hpp"

namespace symaccel {

inline constexpr const char* kTraceHeader = "iter,t,f,grad_norm,grad_evals,elapsed_ns,tau";

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void write_trace_csv(const Trace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write trace file: " + path);
  out << kTraceHeader << '\n';
  for (const auto& r : trace.records) {
    out << r.iter << ',' << format_double(r.t) << ',' << format_double(r.f) << ','
        << format_double(r.grad_norm) << ',' << r.grad_evals_cum << ',' << r.elapsed_ns << ','
        << format_double(r.accepted_tau) << '\n';
  }
  if (!out) throw IoError("write failure: " + path);
}

struct PlotSeries {
  std::string label;
  std::vector<double> xs;
  std::vector<double> ys;
};

// Minimal self-contained SVG line chart, y on a log10 scale. Non-positive or
// non-finite y values are dropped from the polyline.
inline void write_svg_log_plot(const std::vector<PlotSeries>& series, const std::string& title,
                               const std::string& path) {
  const double width = 900, height = 560, ml = 70, mr = 170, mt = 40, mb = 50;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      if (!(s.ys[i] > 0.0) || !std::isfinite(s.ys[i]) || !std::isfinite(s.xs[i])) continue;
      xmin = std::min(xmin, s.xs[i]);
      xmax = std::max(xmax, s.xs[i]);
      const double ly = std::log10(s.ys[i]);
      ymin = std::min(ymin, ly);
      ymax = std::max(ymax, ly);
    }
  }
  if (xmax <= xmin) xmax = xmin + 1.0;
  if (ymax <= ymin) ymax = ymin + 1.0;

  const auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr); };
  const auto py = [&](double ly) {
    return height - mb - (ly - ymin) / (ymax - ymin) * (height - mt - mb);
  };
  static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                 "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

  std::ofstream out(path);
  if (!out) throw IoError("cannot write plot file: " + path);
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
      << "' viewBox='0 0 " << width << " " << height << "'>\n"
      << "<rect width='100%' height='100%' fill='white'/>\n"
      << "<text x='" << width / 2 << "' y='24' text-anchor='middle' font-size='16'>" << title
      << "</text>\n"
      << "<line x1='" << ml << "' y1='" << height - mb << "' x2='" << width - mr << "' y2='"
      << height - mb << "' stroke='black'/>\n"
      << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << height - mb
      << "' stroke='black'/>\n";
  // y-axis decade ticks
  for (int e = static_cast<int>(std::ceil(ymin)); e <= static_cast<int>(std::floor(ymax)); ++e) {
    out << "<line x1='" << ml - 4 << "' y1='" << py(e) << "' x2='" << ml << "' y2='" << py(e)
        << "' stroke='black'/>\n"
        << "<text x='" << ml - 8 << "' y='" << py(e) + 4
        << "' text-anchor='end' font-size='11'>1e" << e << "</text>\n";
  }
  for (int i = 0; i <= 5; ++i) {
    const double x = xmin + (xmax - xmin) * i / 5.0;
    out << "<line x1='" << px(x) << "' y1='" << height - mb << "' x2='" << px(x) << "' y2='"
        << height - mb + 4 << "' stroke='black'/>\n"
        << "<text x='" << px(x) << "' y='" << height - mb + 18
        << "' text-anchor='middle' font-size='11'>" << format_double(x) << "</text>\n";
  }
  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = colors[si % 8];
    out << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      if (!(s.ys[i] > 0.0) || !std::isfinite(s.ys[i])) continue;
      out << px(s.xs[i]) << ',' << py(std::log10(s.ys[i])) << ' ';
    }
    out << "'/>\n"
        << "<text x='" << width - mr + 12 << "' y='" << mt + 16 + 18 * static_cast<double>(si)
        << "' font-size='12' fill='" << color << "'>" << s.label << "</text>\n";
  }
  out << "</svg>\n";
  if (!out) throw IoError("write failure: " + path);
}

}  // namespace symaccel
