#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spp/errors.hpp"
#include "spp/hash.hpp"

namespace spp::io {

struct Table {
  std::vector<std::string> header;  // unit-suffixed column names
  std::vector<std::vector<double>> rows;
  std::string config_hash;          // written as a leading '#' comment when set
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write '" + path.string() + "'");
  f << content;
  if (!f) throw IoError("write failed for '" + path.string() + "'");
}

inline std::string to_csv(const Table& t) {
  std::string s;
  if (!t.config_hash.empty()) s += "# config_hash=" + t.config_hash + "\n";
  for (std::size_t i = 0; i < t.header.size(); ++i) s += (i ? "," : "") + t.header[i];
  s += "\n";
  for (const auto& row : t.rows) {
    if (row.size() != t.header.size()) throw DomainError("CSV row width does not match header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) s += ",";
      s += std::isnan(row[i]) ? std::string("nan") : format_double(row[i]);
    }
    s += "\n";
  }
  return s;
}

inline void emit_csv(const Table& t, const std::filesystem::path& path) { write_file(path, to_csv(t)); }

/// Inverse of to_csv. Lines starting with '#' are skipped; a config_hash comment is recovered.
inline Table parse_csv(const std::string& text) {
  Table t;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string tag = "# config_hash=";
      if (line.rfind(tag, 0) == 0) t.config_hash = line.substr(tag.size());
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!have_header) {
      t.header = cells;
      have_header = true;
      continue;
    }
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(c == "nan" ? std::nan("") : std::stod(c));
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline void emit_json(const nlohmann::json& metadata, const std::filesystem::path& path) {
  write_file(path, metadata.dump(2) + "\n");
}

// Linear interpolation through viridis anchor colours, t in [0, 1].
inline std::string colormap(double t) {
  static constexpr std::array<std::array<int, 3>, 5> anchors{{
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
  t = std::clamp(t, 0.0, 1.0) * 4.0;
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(t), 3);
  const double f = t - static_cast<double>(i);
  char buf[8];
  int rgb[3];
  for (int c = 0; c < 3; ++c)
    rgb[c] = static_cast<int>(std::lround(anchors[i][c] + f * (anchors[i + 1][c] - anchors[i][c])));
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
  return buf;
}

struct HeatmapAxes {
  std::string row_label;  // vertical axis
  std::vector<double> row_values;
  std::string col_label;  // horizontal axis
  std::vector<double> col_values;
  std::string title;
  double vmin = 0.0, vmax = 1.0;
};

namespace detail {

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

}  // namespace detail

/// Self-contained SVG heatmap. NaN cells are sentinels, drawn grey with a cross.
inline std::string svg_heatmap(const std::vector<std::vector<double>>& m, const HeatmapAxes& ax,
                               const std::string& config_hash = "") {
  const std::size_t rows = m.size(), cols = rows ? m.front().size() : 0;
  if (rows == 0 || cols == 0) throw DomainError("heatmap needs a non-empty matrix");
  if (ax.row_values.size() != rows || ax.col_values.size() != cols) throw DomainError("heatmap axes do not match matrix");
  const double plot_w = 480, plot_h = 360, left = 90, top = 50;
  const double cw = plot_w / static_cast<double>(cols), ch = plot_h / static_cast<double>(rows);
  const double span = ax.vmax > ax.vmin ? ax.vmax - ax.vmin : 1.0;
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"700\" height=\"480\" font-family=\"sans-serif\" font-size=\"12\">\n";
  if (!config_hash.empty()) s << "<!-- config_hash=" << config_hash << " -->\n";
  s << "<defs><pattern id=\"invalid\" width=\"6\" height=\"6\" patternUnits=\"userSpaceOnUse\">"
       "<rect width=\"6\" height=\"6\" fill=\"#bbbbbb\"/><path d=\"M0,6 L6,0\" stroke=\"#666\"/></pattern></defs>\n";
  s << "<text x=\"" << left << "\" y=\"25\" font-size=\"14\">" << detail::escape(ax.title) << "</text>\n";
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double v = m[i][j];
      // first row at the bottom
      const double y = top + plot_h - static_cast<double>(i + 1) * ch;
      const double x = left + static_cast<double>(j) * cw;
      const std::string fill = std::isnan(v) ? std::string("url(#invalid)") : colormap((v - ax.vmin) / span);
      s << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cw << "\" height=\"" << ch << "\" fill=\"" << fill << "\"/>\n";
    }
  }
  s << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\"" << plot_h
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  s << "<text x=\"" << left << "\" y=\"" << top + plot_h + 18 << "\">" << detail::num(ax.col_values.front()) << "</text>\n";
  s << "<text x=\"" << left + plot_w << "\" y=\"" << top + plot_h + 18 << "\" text-anchor=\"end\">"
    << detail::num(ax.col_values.back()) << "</text>\n";
  s << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << top + plot_h + 36 << "\" text-anchor=\"middle\">"
    << detail::escape(ax.col_label) << "</text>\n";
  s << "<text x=\"" << left - 6 << "\" y=\"" << top + plot_h << "\" text-anchor=\"end\">" << detail::num(ax.row_values.front()) << "</text>\n";
  s << "<text x=\"" << left - 6 << "\" y=\"" << top + 10 << "\" text-anchor=\"end\">" << detail::num(ax.row_values.back()) << "</text>\n";
  s << "<text x=\"20\" y=\"" << top + plot_h / 2 << "\" transform=\"rotate(-90 20 " << top + plot_h / 2
    << ")\" text-anchor=\"middle\">" << detail::escape(ax.row_label) << "</text>\n";
  // colour bar
  const double bx = left + plot_w + 30;
  for (int k = 0; k < 50; ++k) {
    const double t = (k + 0.5) / 50.0;
    s << "<rect x=\"" << bx << "\" y=\"" << top + plot_h * (1.0 - (k + 1) / 50.0) << "\" width=\"20\" height=\""
      << plot_h / 50.0 + 0.5 << "\" fill=\"" << colormap(t) << "\"/>\n";
  }
  s << "<text x=\"" << bx + 26 << "\" y=\"" << top + 10 << "\">" << detail::num(ax.vmax) << "</text>\n";
  s << "<text x=\"" << bx + 26 << "\" y=\"" << top + plot_h << "\">" << detail::num(ax.vmin) << "</text>\n";
  s << "</svg>\n";
  return s.str();
}

inline void emit_svg_heatmap(const std::vector<std::vector<double>>& m, const HeatmapAxes& ax,
                             const std::filesystem::path& path, const std::string& config_hash = "") {
  write_file(path, svg_heatmap(m, ax, config_hash));
}

struct Series {
  std::string label;
  std::vector<double> x, y;
  bool dashed = false;
};

/// Line chart with linear axes fitted to the data.
inline std::string svg_lines(const std::vector<Series>& series, const std::string& x_label, const std::string& y_label,
                             const std::string& title, const std::string& config_hash = "") {
  if (series.empty()) throw DomainError("line chart needs at least one series");
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size() || s.x.empty()) throw DomainError("series x/y size mismatch");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (!(xmax > xmin)) xmax = xmin + 1;
  if (!(ymax > ymin)) ymax = ymin + 1;
  const double plot_w = 480, plot_h = 320, left = 80, top = 50;
  auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * plot_w; };
  auto py = [&](double y) { return top + plot_h - (y - ymin) / (ymax - ymin) * plot_h; };
  static const std::array<const char*, 6> palette{"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"440\" font-family=\"sans-serif\" font-size=\"12\">\n";
  if (!config_hash.empty()) o << "<!-- config_hash=" << config_hash << " -->\n";
  o << "<text x=\"" << left << "\" y=\"25\" font-size=\"14\">" << detail::escape(title) << "</text>\n";
  o << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\"" << plot_h
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    o << "<polyline fill=\"none\" stroke=\"" << palette[k % palette.size()] << "\" stroke-width=\"1.5\""
      << (s.dashed ? " stroke-dasharray=\"4 3\"" : "") << " points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) o << px(s.x[i]) << "," << py(s.y[i]) << " ";
    o << "\"/>\n";
    o << "<text x=\"" << left + plot_w + 10 << "\" y=\"" << top + 16 * (k + 1) << "\" fill=\""
      << palette[k % palette.size()] << "\">" << detail::escape(s.label) << "</text>\n";
  }
  o << "<text x=\"" << left << "\" y=\"" << top + plot_h + 18 << "\">" << detail::num(xmin) << "</text>\n";
  o << "<text x=\"" << left + plot_w << "\" y=\"" << top + plot_h + 18 << "\" text-anchor=\"end\">" << detail::num(xmax) << "</text>\n";
  o << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << top + plot_h + 36 << "\" text-anchor=\"middle\">"
    << detail::escape(x_label) << "</text>\n";
  o << "<text x=\"" << left - 6 << "\" y=\"" << top + plot_h << "\" text-anchor=\"end\">" << detail::num(ymin) << "</text>\n";
  o << "<text x=\"" << left - 6 << "\" y=\"" << top + 10 << "\" text-anchor=\"end\">" << detail::num(ymax) << "</text>\n";
  o << "<text x=\"20\" y=\"" << top + plot_h / 2 << "\" transform=\"rotate(-90 20 " << top + plot_h / 2
    << ")\" text-anchor=\"middle\">" << detail::escape(y_label) << "</text>\n";
  o << "</svg>\n";
  return o.str();
}

inline void emit_svg_lines(const std::vector<Series>& series, const std::string& x_label, const std::string& y_label,
                           const std::string& title, const std::filesystem::path& path,
                           const std::string& config_hash = "") {
  write_file(path, svg_lines(series, x_label, y_label, title, config_hash));
}

}  // namespace spp::io
