#ifndef FICP_SVD_HPP
#define FICP_SVD_HPP

#include <algorithm>
#include <array>
#include <cmath>

#include "ficp/geometry.hpp"

namespace ficp {

struct SymmetricEigen {
  Vec values{};  // descending
  Matrix vectors;  // eigenvectors as columns
};

/// Cyclic Jacobi eigen-decomposition of a symmetric matrix of order <= 3.
inline SymmetricEigen jacobi_eigen(Matrix a, int max_sweeps = 30, double tolerance = 1e-14) {
  const int n = a.dim;
  Matrix v = Matrix::identity(n);
  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(a(i, j)));

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
    if (off <= tolerance * scale || off == 0.0) break;

    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
  }

  std::array<int, kMaxDim> order{0, 1, 2};
  std::sort(order.begin(), order.begin() + n, [&](int x, int y) { return a(x, x) > a(y, y); });
  SymmetricEigen out;
  out.vectors = Matrix(n);
  for (int j = 0; j < n; ++j) {
    out.values[static_cast<std::size_t>(j)] = a(order[static_cast<std::size_t>(j)], order[static_cast<std::size_t>(j)]);
    for (int i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[static_cast<std::size_t>(j)]);
  }
  return out;
}

struct Svd {
  Matrix u;
  Vec singular{};  // descending, non-negative
  Matrix v;
};

namespace detail {

// Fill columns [filled, n) of m with an orthonormal completion of the first
// `filled` columns.
inline void complete_basis(Matrix& m, int filled) {
  const int n = m.dim;
  for (int col = filled; col < n; ++col) {
    double best_norm = -1.0;
    Vec best{};
    for (int e = 0; e < n; ++e) {
      Vec cand{};
      cand[static_cast<std::size_t>(e)] = 1.0;
      for (int j = 0; j < col; ++j) {
        double dot = 0.0;
        for (int i = 0; i < n; ++i) dot += m(i, j) * cand[static_cast<std::size_t>(i)];
        for (int i = 0; i < n; ++i) cand[static_cast<std::size_t>(i)] -= dot * m(i, j);
      }
      double norm = 0.0;
      for (int i = 0; i < n; ++i) norm += cand[static_cast<std::size_t>(i)] * cand[static_cast<std::size_t>(i)];
      if (norm > best_norm) {
        best_norm = norm;
        best = cand;
      }
    }
    const double inv = 1.0 / std::sqrt(best_norm);
    for (int i = 0; i < n; ++i) m(i, col) = best[static_cast<std::size_t>(i)] * inv;
  }
}

}  // namespace detail

/// SVD of a matrix of order <= 3 by one-sided (Hestenes) Jacobi: plane
/// rotations applied from the right orthogonalise the columns of H, the
/// accumulated rotations form V and the column norms are the singular values.
/// Columns with a negligible norm are replaced by an orthonormal completion.
inline Svd small_svd(const Matrix& h, int max_sweeps = 60) {
  const int n = h.dim;
  Matrix a = h;
  Matrix v = Matrix::identity(n);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (int i = 0; i < n; ++i) {
          alpha += a(i, p) * a(i, p);
          beta += a(i, q) * a(i, q);
          gamma += a(i, p) * a(i, q);
        }
        if (gamma == 0.0 || std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (int i = 0; i < n; ++i) {
          const double ap = a(i, p), aq = a(i, q);
          a(i, p) = c * ap - s * aq;
          a(i, q) = s * ap + c * aq;
          const double vp = v(i, p), vq = v(i, q);
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
      }
    if (!rotated) break;
  }

  std::array<double, kMaxDim> norm{};
  std::array<int, kMaxDim> order{0, 1, 2};
  for (int j = 0; j < n; ++j) {
    double s2 = 0.0;
    for (int i = 0; i < n; ++i) s2 += a(i, j) * a(i, j);
    norm[static_cast<std::size_t>(j)] = std::sqrt(s2);
  }
  std::stable_sort(order.begin(), order.begin() + n,
                   [&](int x, int y) { return norm[static_cast<std::size_t>(x)] > norm[static_cast<std::size_t>(y)]; });

  Svd out;
  out.u = Matrix(n);
  out.v = Matrix(n);
  const double top = norm[static_cast<std::size_t>(order[0])];
  int rank = 0;
  for (int j = 0; j < n; ++j) {
    const int src = order[static_cast<std::size_t>(j)];
    const double sigma = norm[static_cast<std::size_t>(src)];
    for (int i = 0; i < n; ++i) out.v(i, j) = v(i, src);
    if (sigma > 1e-13 * top && sigma > 0.0) {
      out.singular[static_cast<std::size_t>(j)] = sigma;
      for (int i = 0; i < n; ++i) out.u(i, j) = a(i, src) / sigma;
      ++rank;
    }
  }
  // Negligible columns sort last, so the first `rank` columns of U are filled.
  detail::complete_basis(out.u, rank);
  return out;
}

}  // namespace ficp

#endif  // FICP_SVD_HPP
