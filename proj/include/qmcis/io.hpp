#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qmcis/point_set.hpp"
#include "qmcis/model_strings.hpp"

namespace qmcis {

/// Shortest-round-trip is not needed; 17 significant digits always round-trip a double.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// One row per point, d comma-separated columns, no header.
inline void write_points_csv(std::ostream& os, const PointSet& pts) {
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < pts.dim(); ++j) os << (j ? "," : "") << format_double(pts(i, j));
    os << '\n';
  }
}

inline void write_points_csv(const std::string& path, const PointSet& pts) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_points_csv(os, pts);
}

inline PointSet read_points_csv(std::istream& is) {
  std::vector<double> coords;
  std::size_t dim = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto row = detail::parse_double_list(line);
    if (dim == 0) dim = row.size();
    if (row.size() != dim)
      throw std::invalid_argument("points CSV line " + std::to_string(lineno) + ": expected " +
                                  std::to_string(dim) + " columns");
    coords.insert(coords.end(), row.begin(), row.end());
  }
  if (dim == 0) throw std::invalid_argument("points CSV is empty");
  return PointSet(dim, std::move(coords), {SourceKind::explicit_points, 0, ""});
}

inline PointSet read_points_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  return read_points_csv(is);
}

/// One weight per line (commas also accepted).
inline std::vector<double> read_weights(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  std::vector<double> out;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto row = detail::parse_double_list(line);
    out.insert(out.end(), row.begin(), row.end());
  }
  return out;
}

}  // namespace qmcis
