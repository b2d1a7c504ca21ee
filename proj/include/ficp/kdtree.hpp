#ifndef FICP_KDTREE_HPP
#define FICP_KDTREE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "ficp/geometry.hpp"

namespace ficp {

struct Neighbor {
  std::size_t index = 0;
  double distance = 0.0;
};

/// Static kd-tree answering exact nearest-neighbour queries over a fixed model
/// set. Equidistant candidates resolve to the smallest model index.
class NearestIndex {
public:
  static constexpr std::size_t kLeafSize = 16;

  explicit NearestIndex(PointSet source) : source_(std::move(source)) {
    if (source_.empty()) throw std::invalid_argument("cannot index an empty point set");
    order_.resize(source_.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    nodes_.reserve(2 * source_.size() / kLeafSize + 1);
    build(0, order_.size());
  }

  const PointSet& source() const { return source_; }
  int dim() const { return source_.dim(); }
  std::size_t size() const { return source_.size(); }

  Neighbor nearest(std::span<const double> q) const {
    require_dim(dim(), static_cast<int>(q.size()));
    Best best;
    search(0, q, best);
    return {best.index, std::sqrt(best.dist2)};
  }

  /// Leaf buckets as lists of source indices, for structural checks.
  std::vector<std::vector<std::size_t>> leaves() const {
    std::vector<std::vector<std::size_t>> out;
    for (const Node& n : nodes_)
      if (n.is_leaf()) out.emplace_back(order_.begin() + static_cast<std::ptrdiff_t>(n.begin),
                                        order_.begin() + static_cast<std::ptrdiff_t>(n.end));
    return out;
  }

private:
  struct Node {
    std::uint32_t begin = 0, end = 0;  // range in order_
    std::int32_t left = -1, right = -1;
    int split_dim = 0;
    double split = 0.0;
    bool is_leaf() const { return left < 0; }
  };

  struct Best {
    std::size_t index = std::numeric_limits<std::size_t>::max();
    double dist2 = std::numeric_limits<double>::infinity();
  };

  std::int32_t build(std::size_t begin, std::size_t end) {
    const auto id = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(Node{static_cast<std::uint32_t>(begin), static_cast<std::uint32_t>(end)});
    if (end - begin <= kLeafSize) return id;

    // widest spread
    int best_dim = 0;
    double best_spread = -1.0;
    for (int k = 0; k < dim(); ++k) {
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (std::size_t i = begin; i < end; ++i) {
        const double v = source_[order_[i]][static_cast<std::size_t>(k)];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (hi - lo > best_spread) {
        best_spread = hi - lo;
        best_dim = k;
      }
    }
    if (best_spread <= 0.0) return id;  // all coincident: keep as one leaf

    const std::size_t mid = begin + (end - begin) / 2;
    const auto kd = static_cast<std::size_t>(best_dim);
    std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin), order_.begin() + static_cast<std::ptrdiff_t>(mid),
                     order_.begin() + static_cast<std::ptrdiff_t>(end), [&](std::size_t a, std::size_t b) {
                       const double va = source_[a][kd], vb = source_[b][kd];
                       return va < vb || (va == vb && a < b);
                     });
    const double split = source_[order_[mid]][kd];
    const std::int32_t left = build(begin, mid);
    const std::int32_t right = build(mid, end);
    Node& n = nodes_[static_cast<std::size_t>(id)];
    n.split_dim = best_dim;
    n.split = split;
    n.left = left;
    n.right = right;
    return id;
  }

  void search(std::int32_t id, std::span<const double> q, Best& best) const {
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    if (n.is_leaf()) {
      for (std::uint32_t i = n.begin; i < n.end; ++i) {
        const std::size_t idx = order_[i];
        const double d2 = squared_distance(source_[idx], q);
        if (d2 < best.dist2 || (d2 == best.dist2 && idx < best.index)) {
          best.dist2 = d2;
          best.index = idx;
        }
      }
      return;
    }
    // left holds coordinates <= split, right holds coordinates >= split
    const double diff = q[static_cast<std::size_t>(n.split_dim)] - n.split;
    const std::int32_t near = diff <= 0.0 ? n.left : n.right;
    const std::int32_t far = diff <= 0.0 ? n.right : n.left;
    search(near, q, best);
    if (diff * diff <= best.dist2) search(far, q, best);
  }

  PointSet source_;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
};

inline NearestIndex build_index(PointSet model) { return NearestIndex(std::move(model)); }

inline Neighbor nearest(const NearestIndex& idx, std::span<const double> q) { return idx.nearest(q); }

}  // namespace ficp

#endif  // FICP_KDTREE_HPP
