#include "hut/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "hut/core.hpp"
#include "hut/errors.hpp"

namespace hut {

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 420;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 150;  // legend column
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 50;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b"};

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void absorb(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }

  void widen_if_flat() {
    if (lo == hi) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
};

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

std::vector<double> tick_values(const Range& range, int count) {
  std::vector<double> ticks;
  for (int i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / (count - 1);
    ticks.push_back(range.lo + t * (range.hi - range.lo));
  }
  return ticks;
}

}  // namespace

void write_line_plot(const std::string& path, const std::vector<Series>& series,
                     const PlotOptions& options) {
  Range xr, yr;
  for (const Series& s : series) {
    if (s.xs.size() != s.ys.size()) {
      throw DataError("series " + s.label + " has mismatched point counts");
    }
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      xr.absorb(s.xs[i]);
      yr.absorb(options.log_y ? std::log10(s.ys[i]) : s.ys[i]);
    }
  }
  if (!std::isfinite(xr.lo) || !std::isfinite(yr.lo)) {
    throw DataError("nothing to plot for " + path);
  }
  xr.widen_if_flat();
  yr.widen_if_flat();

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  const auto px = [&](double x) {
    return kMarginLeft + plot_w * (x - xr.lo) / (xr.hi - xr.lo);
  };
  const auto py = [&](double y) {
    const double v = options.log_y ? std::log10(y) : y;
    return kMarginTop + plot_h * (1.0 - (v - yr.lo) / (yr.hi - yr.lo));
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n";
  svg << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"22\" "
      << "text-anchor=\"middle\" font-size=\"15\" font-family=\"sans-serif\">"
      << escape(options.title) << "</text>\n";

  // Frame and ticks.
  svg << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\""
      << plot_w << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (double tx : tick_values(xr, 5)) {
    const double x = px(tx);
    svg << "<line x1=\"" << x << "\" y1=\"" << kMarginTop + plot_h << "\" x2=\""
        << x << "\" y2=\"" << kMarginTop + plot_h + 5
        << "\" stroke=\"#444\"/>\n";
    svg << "<text x=\"" << x << "\" y=\"" << kMarginTop + plot_h + 18
        << "\" text-anchor=\"middle\" font-size=\"11\" "
        << "font-family=\"sans-serif\">" << format_value(tx) << "</text>\n";
  }
  for (double tv : tick_values(yr, 5)) {
    const double value = options.log_y ? std::pow(10.0, tv) : tv;
    const double y = kMarginTop + plot_h * (1.0 - (tv - yr.lo) / (yr.hi - yr.lo));
    svg << "<line x1=\"" << kMarginLeft - 5 << "\" y1=\"" << y << "\" x2=\""
        << kMarginLeft << "\" y2=\"" << y << "\" stroke=\"#444\"/>\n";
    svg << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << y + 4
        << "\" text-anchor=\"end\" font-size=\"11\" "
        << "font-family=\"sans-serif\">" << format_value(value) << "</text>\n";
  }
  svg << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\" font-size=\"13\" "
      << "font-family=\"sans-serif\">" << escape(options.x_label)
      << "</text>\n";
  svg << "<text x=\"16\" y=\"" << kMarginTop + plot_h / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" "
      << "font-family=\"sans-serif\" transform=\"rotate(-90 16 "
      << kMarginTop + plot_h / 2 << ")\">" << escape(options.y_label)
      << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < series[s].xs.size(); ++i) {
      svg << px(series[s].xs[i]) << "," << py(series[s].ys[i]) << " ";
    }
    svg << "\"/>\n";
    for (std::size_t i = 0; i < series[s].xs.size(); ++i) {
      svg << "<circle cx=\"" << px(series[s].xs[i]) << "\" cy=\""
          << py(series[s].ys[i]) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    const double ly = kMarginTop + 16.0 * static_cast<double>(s);
    svg << "<line x1=\"" << kWidth - kMarginRight + 10 << "\" y1=\"" << ly
        << "\" x2=\"" << kWidth - kMarginRight + 34 << "\" y2=\"" << ly
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << kWidth - kMarginRight + 40 << "\" y=\"" << ly + 4
        << "\" font-size=\"11\" font-family=\"sans-serif\">"
        << escape(series[s].label) << "</text>\n";
  }
  svg << "</svg>\n";

  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << svg.str();
  if (!out) throw DataError("cannot write " + path);
}

}  // namespace hut
