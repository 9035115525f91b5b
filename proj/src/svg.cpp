#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "oemsim/errors.hpp"
#include "oemsim/harness.hpp"

namespace oemsim {

namespace {

constexpr double canvas_w = 860.0;
constexpr double canvas_h = 540.0;
constexpr double plot_left = 70.0;
constexpr double plot_right = 640.0;
constexpr double plot_top = 45.0;
constexpr double plot_bottom = 495.0;

const char* const palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                               "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f",
                               "#bcbd22", "#17becf"};
constexpr int palette_size = 10;

std::string fmt(double value, const char* spec = "%.6g") {
  char buf[40];
  std::snprintf(buf, sizeof buf, spec, value);
  return buf;
}

std::string escape_text(const std::string& text) {
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

}  // namespace

std::string svg_string(const SweepResult& result) {
  double x_min = 0.0;
  double x_max = 1.0;
  if (!result.rows.empty()) {
    x_min = result.rows.front().axis_value;
    x_max = result.rows.back().axis_value;
  }
  if (!(x_min < x_max)) {
    x_max = x_min + 1.0;
  }
  const bool log_x = result.axis_log_spaced && x_min > 0.0;
  const double tx_min = log_x ? std::log10(x_min) : x_min;
  const double tx_max = log_x ? std::log10(x_max) : x_max;

  double y_max = 0.0;
  for (const auto& row : result.rows) {
    for (double value : row.e_n) {
      y_max = std::max(y_max, value);
    }
  }
  y_max = y_max > 0.0 ? 1.08 * y_max : 1.0;

  const auto map_x = [&](double value) {
    const double t = log_x ? std::log10(value) : value;
    return plot_left + (t - tx_min) / (tx_max - tx_min) * (plot_right - plot_left);
  };
  const auto map_y = [&](double value) {
    return plot_bottom - value / y_max * (plot_bottom - plot_top);
  };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << canvas_w
      << "\" height=\"" << canvas_h << "\" viewBox=\"0 0 " << canvas_w << ' '
      << canvas_h << "\">\n";
  out << "<rect width=\"" << canvas_w << "\" height=\"" << canvas_h
      << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << (plot_left + plot_right) / 2.0
      << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">"
      << escape_text(result.scenario_name) << "</text>\n";

  const int ticks = 6;
  for (int i = 0; i < ticks; ++i) {
    const double t = tx_min + (tx_max - tx_min) * i / (ticks - 1);
    const double value = log_x ? std::pow(10.0, t) : t;
    const double px = map_x(value);
    out << "<line x1=\"" << fmt(px) << "\" y1=\"" << plot_top << "\" x2=\""
        << fmt(px) << "\" y2=\"" << plot_bottom
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << fmt(px) << "\" y=\"" << plot_bottom + 18.0
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt(value, "%.4g") << "</text>\n";
  }
  for (int i = 0; i < ticks; ++i) {
    const double value = y_max * i / (ticks - 1);
    const double py = map_y(value);
    out << "<line x1=\"" << plot_left << "\" y1=\"" << fmt(py) << "\" x2=\""
        << plot_right << "\" y2=\"" << fmt(py)
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << plot_left - 8.0 << "\" y=\"" << fmt(py + 4.0)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt(value, "%.4g") << "</text>\n";
  }
  out << "<rect x=\"" << plot_left << "\" y=\"" << plot_top << "\" width=\""
      << plot_right - plot_left << "\" height=\"" << plot_bottom - plot_top
      << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out << "<text x=\"" << (plot_left + plot_right) / 2.0 << "\" y=\""
      << plot_bottom + 38.0
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << escape_text(result.axis_name) << (log_x ? " (log scale)" : "")
      << "</text>\n";
  out << "<text x=\"20\" y=\"" << (plot_top + plot_bottom) / 2.0
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 20 "
      << (plot_top + plot_bottom) / 2.0 << ")\">E_N</text>\n";

  const std::size_t columns = result.observable_labels.size();
  for (std::size_t c = 0; c < columns; ++c) {
    const char* color = palette[c % palette_size];
    std::string points;
    const auto flush = [&]() {
      if (!points.empty()) {
        out << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.5\" points=\"" << points << "\"/>\n";
        points.clear();
      }
    };
    for (const auto& row : result.rows) {
      if (row.e_n.size() != columns) {
        flush();
        continue;
      }
      if (!points.empty()) points += ' ';
      points += fmt(map_x(row.axis_value)) + "," + fmt(map_y(row.e_n[c]));
    }
    flush();
  }

  const double legend_x = plot_right + 16.0;
  for (std::size_t c = 0; c < columns; ++c) {
    const double y = plot_top + 10.0 + 20.0 * static_cast<double>(c);
    out << "<line x1=\"" << legend_x << "\" y1=\"" << fmt(y) << "\" x2=\""
        << legend_x + 24.0 << "\" y2=\"" << fmt(y) << "\" stroke=\""
        << palette[c % palette_size] << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << legend_x + 30.0 << "\" y=\"" << fmt(y + 4.0)
        << "\" font-family=\"sans-serif\" font-size=\"12\">"
        << escape_text(result.observable_labels[c]) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void emit_svg_plot(const SweepResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw io_error("cannot open SVG output file: " + path);
  }
  out << svg_string(result);
  out.flush();
  if (!out) {
    throw io_error("failed writing SVG output file: " + path);
  }
}

}  // namespace oemsim
