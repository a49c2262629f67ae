#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "pllnet/error.hpp"

namespace pllnet::cli {

using Cell = std::variant<double, long, std::string>;

/// \brief Rows of mixed cells with a header and leading comment lines.
struct Table {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }

  std::optional<std::size_t> column(const std::string& name) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
  }
};

inline std::string format_number(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

inline std::string format_cell(const Cell& c) {
  if (auto d = std::get_if<double>(&c)) return format_number(*d);
  if (auto l = std::get_if<long>(&c)) return std::to_string(*l);
  return std::get<std::string>(c);
}

inline void write_csv(const Table& t, std::ostream& os) {
  for (const auto& c : t.comments) os << "# " << c << "\n";
  for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
  os << "\n";
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_cell(r[i]);
    os << "\n";
  }
}

inline double numeric(const Cell& c) {
  if (auto d = std::get_if<double>(&c)) return *d;
  if (auto l = std::get_if<long>(&c)) return static_cast<double>(*l);
  return std::numeric_limits<double>::quiet_NaN();
}

/// \brief Self-contained SVG line chart of the y columns against column x, one polyline per group.
inline void write_svg(const Table& t, const std::string& x, const std::vector<std::string>& ys,
                      const std::vector<std::string>& group_by, std::ostream& os) {
  const auto xi = t.column(x);
  if (!xi) throw Error(ErrorCode::InvalidArgument, "chart column missing: " + x);
  std::map<std::string, std::vector<std::pair<double, double>>> series;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& y : ys) {
    const auto yi = t.column(y);
    if (!yi) throw Error(ErrorCode::InvalidArgument, "chart column missing: " + y);
    for (const auto& r : t.rows) {
      const double xv = numeric(r[*xi]), yv = numeric(r[*yi]);
      if (!std::isfinite(xv) || !std::isfinite(yv)) continue;
      std::string key = y + "/";
      for (const auto& g : group_by)
        if (auto gi = t.column(g)) key += format_cell(r[*gi]) + "/";
      series[key].emplace_back(xv, yv);
      x0 = std::min(x0, xv); x1 = std::max(x1, xv);
      y0 = std::min(y0, yv); y1 = std::max(y1, yv);
    }
  }
  const std::string y = ys.size() == 1 ? ys[0] : "value";
  if (x0 == x1) { x0 -= 1; x1 += 1; }
  if (y0 == y1) { y0 -= 1; y1 += 1; }
  if (series.empty()) { x0 = y0 = 0; x1 = y1 = 1; }
  const double w = 800, h = 500, m = 60;
  auto px = [&](double v) { return m + (v - x0) / (x1 - x0) * (w - 2 * m); };
  auto py = [&](double v) { return h - m - (v - y0) / (y1 - y0) * (h - 2 * m); };
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  os << std::setprecision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w
     << " " << h << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<rect x=\"" << m << "\" y=\"" << m << "\" width=\"" << w - 2 * m << "\" height=\"" << h - 2 * m
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << w / 2 << "\" y=\"" << h - 15 << "\" text-anchor=\"middle\" font-size=\"14\">" << x << "</text>\n";
  os << "<text x=\"15\" y=\"" << h / 2 << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 15 " << h / 2
     << ")\">" << y << "</text>\n";
  os << "<text x=\"" << m << "\" y=\"" << h - m + 16 << "\" font-size=\"11\">" << x0 << "</text>\n";
  os << "<text x=\"" << w - m << "\" y=\"" << h - m + 16 << "\" text-anchor=\"end\" font-size=\"11\">" << x1 << "</text>\n";
  os << "<text x=\"" << m - 4 << "\" y=\"" << h - m << "\" text-anchor=\"end\" font-size=\"11\">" << y0 << "</text>\n";
  os << "<text x=\"" << m - 4 << "\" y=\"" << m + 10 << "\" text-anchor=\"end\" font-size=\"11\">" << y1 << "</text>\n";
  if (y0 < 0 && y1 > 0)
    os << "<line x1=\"" << m << "\" y1=\"" << py(0) << "\" x2=\"" << w - m << "\" y2=\"" << py(0)
       << "\" stroke=\"#bbbbbb\" stroke-dasharray=\"4 3\"/>\n";
  std::size_t k = 0;
  for (auto& [key, pts] : series) {
    std::stable_sort(pts.begin(), pts.end());
    os << "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" << palette[k++ % 8] << "\" points=\"";
    for (const auto& [a, b] : pts) os << px(a) << "," << py(b) << " ";
    os << "\"/>\n";
  }
  os << "</svg>\n";
}

}  // namespace pllnet::cli
