#ifndef FICP_CORRESPONDENCE_HPP
#define FICP_CORRESPONDENCE_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "ficp/geometry.hpp"
#include "ficp/kdtree.hpp"

namespace ficp {

/// Nearest-model matching of every data point, with residuals and the data
/// indices sorted by (residual, index).
struct Matching {
  std::vector<std::size_t> model_index;
  std::vector<double> residual;
  std::vector<std::size_t> sorted_order;

  std::size_t size() const { return residual.size(); }
};

inline void sort_by_residual(Matching& m) {
  m.sorted_order.resize(m.residual.size());
  std::iota(m.sorted_order.begin(), m.sorted_order.end(), std::size_t{0});
  std::sort(m.sorted_order.begin(), m.sorted_order.end(), [&](std::size_t a, std::size_t b) {
    return m.residual[a] < m.residual[b] || (m.residual[a] == m.residual[b] && a < b);
  });
}

inline Matching match_all(const PointSet& data, const NearestIndex& idx) {
  if (data.empty()) throw std::invalid_argument("cannot match an empty data set");
  require_dim(idx.dim(), data.dim());
  Matching m;
  m.model_index.resize(data.size());
  m.residual.resize(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Neighbor nb = idx.nearest(data[i]);
    m.model_index[i] = nb.index;
    m.residual[i] = nb.distance;
  }
  sort_by_residual(m);
  return m;
}

/// floor(f * n), guarded against f = i/n landing a hair below i after rounding.
inline std::size_t fraction_count(double f, std::size_t n) {
  const double raw = f * static_cast<double>(n);
  return static_cast<std::size_t>(std::floor(raw + 1e-9 * std::max(1.0, raw)));
}

/// The floor(f|D|) data indices with the smallest residuals.
inline std::vector<std::size_t> select_subset(const Matching& m, double f) {
  if (!(f > 0.0) || f > 1.0) throw std::invalid_argument("fraction must lie in (0, 1]");
  const std::size_t k = std::min(fraction_count(f, m.size()), m.size());
  if (k < 1) throw std::invalid_argument("fraction selects no points");
  return {m.sorted_order.begin(), m.sorted_order.begin() + static_cast<std::ptrdiff_t>(k)};
}

}  // namespace ficp

#endif  // FICP_CORRESPONDENCE_HPP
