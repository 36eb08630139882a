#pragma once

#include <algorithm>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

namespace agentsafe::svg {

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
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

inline std::string num(double v, int precision = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

inline std::string text(double x, double y, const std::string& s, const char* anchor = "middle", int size = 12) {
  return "<text x=\"" + num(x, 1) + "\" y=\"" + num(y, 1) + "\" font-family=\"sans-serif\" font-size=\"" +
         std::to_string(size) + "\" text-anchor=\"" + anchor + "\">" + escape(s) + "</text>\n";
}

inline std::string open(int width, int height) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) + "\" height=\"" +
         std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(width) + " " + std::to_string(height) +
         "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

/// Step plot (values hold until the next point), one polyline per series.
inline std::string step_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                              const std::vector<Series>& series, double y_max) {
  const int w = 640, h = 400, left = 60, right = 140, top = 40, bottom = 50;
  double x_max = 1.0;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) x_max = std::max(x_max, x);
  if (y_max <= 0) y_max = 1.0;
  auto px = [&](double x) { return left + (w - left - right) * x / x_max; };
  auto py = [&](double y) { return h - bottom - (h - top - bottom) * y / y_max; };
  static const char* kColors[] = {"#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2"};

  std::string out = open(w, h);
  out += text(w / 2.0, 22, title, "middle", 15);
  out += "<line x1=\"" + num(left) + "\" y1=\"" + num(py(0)) + "\" x2=\"" + num(px(x_max)) + "\" y2=\"" + num(py(0)) +
         "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + num(left) + "\" y1=\"" + num(py(0)) + "\" x2=\"" + num(left) + "\" y2=\"" + num(py(y_max)) +
         "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    const double yv = y_max * k / 5.0, xv = x_max * k / 5.0;
    out += text(left - 6, py(yv) + 4, num(yv, 1), "end", 10);
    out += text(px(xv), h - bottom + 16, num(xv, 0), "middle", 10);
  }
  out += text(w / 2.0 - right / 2.0, h - 12, x_label);
  out += "<text x=\"16\" y=\"" + num(h / 2.0, 1) + "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 16 " + num(h / 2.0, 1) + ")\">" + escape(y_label) + "</text>\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const char* color = kColors[i % 7];
    std::string pts;
    for (std::size_t k = 0; k < s.points.size(); ++k) {
      const auto [x, y] = s.points[k];
      if (k > 0) pts += num(px(x)) + "," + num(py(s.points[k - 1].second)) + " ";
      pts += num(px(x)) + "," + num(py(y)) + " ";
    }
    out += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"2\" points=\"" + pts + "\"/>\n";
    const double ly = top + 20 + 18.0 * static_cast<double>(i);
    out += "<line x1=\"" + num(w - right + 10) + "\" y1=\"" + num(ly) + "\" x2=\"" + num(w - right + 30) + "\" y2=\"" +
           num(ly) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    out += text(w - right + 34, ly + 4, s.label, "start", 11);
  }
  return out + "</svg>\n";
}

/// Annotated heatmap; nullopt cells are drawn hatched grey and left unlabeled.
inline std::string heatmap(const std::string& title, const std::vector<std::string>& rows,
                           const std::vector<std::string>& cols, const std::vector<std::vector<std::optional<double>>>& cells,
                           int precision) {
  const int cell = 56, left = 130, top = 110;
  const int w = left + cell * static_cast<int>(cols.size()) + 30;
  const int h = top + cell * static_cast<int>(rows.size()) + 30;
  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (const auto& r : cells)
    for (const auto& c : r)
      if (c) {
        lo = any ? std::min(lo, *c) : *c;
        hi = any ? std::max(hi, *c) : *c;
        any = true;
      }
  lo = std::min(lo, 0.0);
  std::string out = open(w, h);
  out += "<defs><pattern id=\"mask\" width=\"6\" height=\"6\" patternUnits=\"userSpaceOnUse\">"
         "<rect width=\"6\" height=\"6\" fill=\"#dddddd\"/><path d=\"M0,6 L6,0\" stroke=\"#999999\"/></pattern></defs>\n";
  out += text(w / 2.0, 24, title, "middle", 15);
  for (std::size_t j = 0; j < cols.size(); ++j) {
    const double x = left + cell * (j + 0.5);
    out += "<text x=\"" + num(x, 1) + "\" y=\"" + num(top - 8.0, 1) +
           "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"start\" transform=\"rotate(-45 " + num(x, 1) +
           " " + num(top - 8.0, 1) + ")\">" + escape(cols[j]) + "</text>\n";
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double y = top + cell * static_cast<double>(i);
    out += text(left - 8, y + cell / 2.0 + 4, rows[i], "end", 11);
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const double x = left + cell * static_cast<double>(j);
      const auto& c = cells[i][j];
      std::string fill = "url(#mask)";
      if (c) {
        const double t = hi > lo ? (*c - lo) / (hi - lo) : 0.0;
        const int g = static_cast<int>(255 - 180 * t);
        fill = "rgb(255," + std::to_string(g) + "," + std::to_string(g) + ")";
      }
      out += "<rect x=\"" + num(x, 1) + "\" y=\"" + num(y, 1) + "\" width=\"" + std::to_string(cell) + "\" height=\"" +
             std::to_string(cell) + "\" fill=\"" + fill + "\" stroke=\"white\"/>\n";
      if (c) out += text(x + cell / 2.0, y + cell / 2.0 + 4, num(*c, precision), "middle", 11);
    }
  }
  return out + "</svg>\n";
}

}  // namespace agentsafe::svg
