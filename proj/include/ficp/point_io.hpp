#ifndef FICP_POINT_IO_HPP
#define FICP_POINT_IO_HPP

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ficp/geometry.hpp"

namespace ficp {

class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

/// Renders with 17 significant digits so the text reparses to the identical double.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Whitespace-separated coordinates, one point per line. Lines whose first
// non-blank character is '#' and blank lines are skipped. The first data line
// fixes the dimension.
inline PointSet read_points(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  int dim = 0;
  std::vector<double> coords;
  std::vector<double> row;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line);
    row.clear();
    std::string tok;
    while (ss >> tok) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        throw ParseError(lineno, "not a number: '" + tok + "'");
      }
      if (used != tok.size()) throw ParseError(lineno, "not a number: '" + tok + "'");
      if (!std::isfinite(v)) throw ParseError(lineno, "non-finite coordinate");
      row.push_back(v);
    }
    if (dim == 0) {
      dim = static_cast<int>(row.size());
      if (dim < 1 || dim > kMaxDim) throw ParseError(lineno, "unsupported dimension " + std::to_string(dim));
    } else if (static_cast<int>(row.size()) != dim) {
      throw ParseError(lineno, "expected " + std::to_string(dim) + " coordinates, found " + std::to_string(row.size()));
    }
    coords.insert(coords.end(), row.begin(), row.end());
  }
  if (dim == 0) throw ParseError(lineno, "no points found");
  return PointSet(dim, std::move(coords));
}

inline PointSet read_points_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  try {
    return read_points(in);
  } catch (const ParseError& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

inline void write_points(std::ostream& out, const PointSet& ps) {
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (int k = 0; k < ps.dim(); ++k) {
      if (k) out << ' ';
      out << format_double(ps[i][static_cast<std::size_t>(k)]);
    }
    out << '\n';
  }
}

inline void write_points_file(const std::string& path, const PointSet& ps) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  write_points(out, ps);
}

}  // namespace ficp

#endif  // FICP_POINT_IO_HPP
