// Copyright 2026 The fieldlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "fieldlab/dirac.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace fieldlab::io {

/// Shortest round-trip decimal text for a double.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// A table cell: number, integer or text.
class Cell {
 public:
  Cell(double v) : text_(format_double(v)) {}
  Cell(int v) : text_(std::to_string(v)) {}
  Cell(long v) : text_(std::to_string(v)) {}
  Cell(unsigned long v) : text_(std::to_string(v)) {}
  Cell(unsigned long long v) : text_(std::to_string(v)) {}
  Cell(long long v) : text_(std::to_string(v)) {}
  Cell(unsigned v) : text_(std::to_string(v)) {}
  Cell(bool v) : text_(v ? "true" : "false") {}
  Cell(const char* s) : text_(s) {}
  Cell(std::string s) : text_(std::move(s)) {}
  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  return out + "\"";
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<Cell> cells) {
    if (cells.size() != columns.size()) throw domain_error("row width does not match the header");
    std::vector<std::string> r;
    for (auto& c : cells) r.push_back(c.text());
    rows.push_back(std::move(r));
  }

  void write(std::ostream& os) const {
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << csv_escape(columns[i]);
    os << '\n';
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_escape(r[i]);
      os << '\n';
    }
  }

  std::string str() const {
    std::ostringstream os;
    write(os);
    return os.str();
  }
};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
  if (!f) throw std::runtime_error("write failed for " + path.string());
}

// --- SVG plots ----------------------------------------------------------------

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct LinePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  std::vector<Series> series;
};

inline std::string svg_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

/// Minimal line/marker chart.
inline std::string render_svg(const LinePlot& p) {
  const double w = 640, h = 420, left = 80, right = 20, top = 40, bottom = 60;
  auto tx = [&](double v) { return p.log_x ? std::log10(v) : v; };
  auto ty = [&](double v) { return p.log_y ? std::log10(v) : v; };
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : p.series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double xv = tx(s.x[i]), yv = ty(s.y[i]);
      if (!std::isfinite(xv) || !std::isfinite(yv)) continue;
      x0 = std::min(x0, xv);
      x1 = std::max(x1, xv);
      y0 = std::min(y0, yv);
      y1 = std::max(y1, yv);
    }
  }
  if (!(x1 > x0)) { x0 -= 1; x1 += 1; }
  if (!(y1 > y0)) { y0 -= 1; y1 += 1; }
  auto px = [&](double v) { return left + (tx(v) - x0) / (x1 - x0) * (w - left - right); };
  auto py = [&](double v) { return h - bottom - (ty(v) - y0) / (y1 - y0) * (h - top - bottom); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << w / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
     << svg_escape(p.title) << "</text>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << h - bottom << "\" x2=\"" << w - right << "\" y2=\""
     << h - bottom << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << h - bottom
     << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double xv = x0 + (x1 - x0) * t / 4.0, yv = y0 + (y1 - y0) * t / 4.0;
    const double xp = left + (w - left - right) * t / 4.0, yp = h - bottom - (h - top - bottom) * t / 4.0;
    char bx[32], by[32];
    std::snprintf(bx, sizeof bx, "%.3g", p.log_x ? std::pow(10.0, xv) : xv);
    std::snprintf(by, sizeof by, "%.3g", p.log_y ? std::pow(10.0, yv) : yv);
    os << "<text x=\"" << xp << "\" y=\"" << h - bottom + 18 << "\" text-anchor=\"middle\" font-size=\"11\">"
       << bx << "</text>\n";
    os << "<text x=\"" << left - 6 << "\" y=\"" << yp + 4 << "\" text-anchor=\"end\" font-size=\"11\">" << by
       << "</text>\n";
  }
  os << "<text x=\"" << (left + w - right) / 2 << "\" y=\"" << h - 16
     << "\" text-anchor=\"middle\" font-size=\"13\">" << svg_escape(p.x_label) << "</text>\n";
  os << "<text x=\"18\" y=\"" << (top + h - bottom) / 2 << "\" text-anchor=\"middle\" font-size=\"13\" "
     << "transform=\"rotate(-90 18 " << (top + h - bottom) / 2 << ")\">" << svg_escape(p.y_label)
     << "</text>\n";
  for (std::size_t s = 0; s < p.series.size(); ++s) {
    const auto& ser = p.series[s];
    const char* col = colors[s % 5];
    os << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < ser.x.size(); ++i) {
      if (!std::isfinite(tx(ser.x[i])) || !std::isfinite(ty(ser.y[i]))) continue;
      os << px(ser.x[i]) << ',' << py(ser.y[i]) << ' ';
    }
    os << "\"/>\n";
    for (std::size_t i = 0; i < ser.x.size(); ++i) {
      if (!std::isfinite(tx(ser.x[i])) || !std::isfinite(ty(ser.y[i]))) continue;
      os << "<circle cx=\"" << px(ser.x[i]) << "\" cy=\"" << py(ser.y[i]) << "\" r=\"3\" fill=\"" << col
         << "\"/>\n";
    }
    os << "<text x=\"" << w - right - 150 << "\" y=\"" << top + 16 * (s + 1) << "\" font-size=\"12\" fill=\""
       << col << "\">" << svg_escape(ser.name) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

/// Grayscale heatmap of a rows x cols array (row-major).
inline std::string render_heatmap(const std::string& title, const std::vector<double>& values, int rows,
                                  int cols) {
  const int cell = std::max(4, 384 / std::max(rows, cols));
  const double lo = *std::min_element(values.begin(), values.end());
  const double hi = *std::max_element(values.begin(), values.end());
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << cols * cell + 20 << "\" height=\""
     << rows * cell + 50 << "\">\n<text x=\"10\" y=\"20\" font-size=\"14\">" << svg_escape(title)
     << "</text>\n";
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const double v = values[static_cast<std::size_t>(r) * cols + c];
      const int g = hi > lo ? static_cast<int>(255.0 * (1.0 - (v - lo) / (hi - lo))) : 255;
      os << "<rect x=\"" << 10 + c * cell << "\" y=\"" << 35 + r * cell << "\" width=\"" << cell
         << "\" height=\"" << cell << "\" fill=\"rgb(" << g << ',' << g << ',' << g << ")\"/>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

// --- spinor grid dumps ------------------------------------------------------------

/// CSV "site,x,y,z,re0,im0,...,re3,im3" in position representation.
inline void write_grid_csv(std::ostream& os, const dirac::SpinorField& field) {
  const auto p = field.to_position();
  const auto& b = p.basis();
  os << "site,x,y,z,re0,im0,re1,im1,re2,im2,re3,im3\n";
  for (std::size_t i = 0; i < b.size(); ++i) {
    const Vec3 x = b.position(i);
    os << i << ',' << format_double(x.x()) << ',' << format_double(x.y()) << ',' << format_double(x.z());
    for (int c = 0; c < 4; ++c) {
      os << ',' << format_double(p[i][c].real()) << ',' << format_double(p[i][c].imag());
    }
    os << '\n';
  }
}

/// Binary "FLGD", u32 version, i32 dim, i32 N, f64 extent, then 8 f64 per site.
inline void write_grid_binary(std::ostream& os, const dirac::SpinorField& field) {
  const auto p = field.to_position();
  const auto& b = p.basis();
  os.write("FLGD", 4);
  const std::uint32_t version = 1;
  const std::int32_t dim = b.dim(), n = b.points_per_axis();
  const double extent = b.extent();
  os.write(reinterpret_cast<const char*>(&version), 4);
  os.write(reinterpret_cast<const char*>(&dim), 4);
  os.write(reinterpret_cast<const char*>(&n), 4);
  os.write(reinterpret_cast<const char*>(&extent), 8);
  for (std::size_t i = 0; i < b.size(); ++i) {
    for (int c = 0; c < 4; ++c) {
      const double re = p[i][c].real(), im = p[i][c].imag();
      os.write(reinterpret_cast<const char*>(&re), 8);
      os.write(reinterpret_cast<const char*>(&im), 8);
    }
  }
}

inline dirac::SpinorField read_grid_binary(std::istream& is) {
  char magic[4];
  if (!is.read(magic, 4) || std::string(magic, 4) != "FLGD") throw domain_error("not a grid dump");
  std::uint32_t version = 0;
  std::int32_t dim = 0, n = 0;
  double extent = 0.0;
  is.read(reinterpret_cast<char*>(&version), 4);
  is.read(reinterpret_cast<char*>(&dim), 4);
  is.read(reinterpret_cast<char*>(&n), 4);
  is.read(reinterpret_cast<char*>(&extent), 8);
  if (!is || version != 1) throw domain_error("unsupported grid dump");
  const auto b = ModeBasis::build(dim, extent, n);
  std::vector<Spinor> vals(b.size());
  for (auto& v : vals) {
    for (int c = 0; c < 4; ++c) {
      double re = 0.0, im = 0.0;
      is.read(reinterpret_cast<char*>(&re), 8);
      is.read(reinterpret_cast<char*>(&im), 8);
      v[c] = cplx(re, im);
    }
  }
  if (!is) throw domain_error("truncated grid dump");
  return dirac::SpinorField(b, dirac::Representation::position, std::move(vals));
}

}  // namespace fieldlab::io
