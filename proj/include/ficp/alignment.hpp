#ifndef FICP_ALIGNMENT_HPP
#define FICP_ALIGNMENT_HPP

#include <cmath>
#include <stdexcept>
#include <string>

#include "ficp/geometry.hpp"
#include "ficp/svd.hpp"

namespace ficp {

/// Source points and their matched targets, pairwise by index.
struct PairedSample {
  PointSet source;
  PointSet target;

  PairedSample(PointSet src, PointSet tgt) : source(std::move(src)), target(std::move(tgt)) {
    require_dim(source.dim(), target.dim());
    if (source.size() != target.size()) throw std::invalid_argument("paired sample lengths differ");
    if (source.empty()) throw std::invalid_argument("paired sample is empty");
  }

  int dim() const { return source.dim(); }
  std::size_t size() const { return source.size(); }
};

/// Thrown when the sample cannot determine the requested transform.
class DegenerateSample : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Sum of squared distances ||T(p) - q||^2 over the pairs.
inline double alignment_objective(const Transform& t, const PairedSample& s) {
  double sum = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const Vec p = t.apply(s.source.vec(i));
    sum += squared_distance(std::span<const double>(p.data(), static_cast<std::size_t>(s.dim())), s.target[i]);
  }
  return sum;
}

namespace detail {

struct CenteredMoments {
  Vec source_mean{};
  Vec target_mean{};
  Matrix cross;        // sum (p - p̄)(q - q̄)^T
  Matrix source_scatter;  // sum (p - p̄)(p - p̄)^T
  double source_variance = 0.0;  // trace of source_scatter
};

inline CenteredMoments centered_moments(const PairedSample& s) {
  const int d = s.dim();
  CenteredMoments m;
  m.source_mean = s.source.centroid();
  m.target_mean = s.target.centroid();
  m.cross = Matrix(d);
  m.source_scatter = Matrix(d);
  for (std::size_t i = 0; i < s.size(); ++i) {
    Vec p{}, q{};
    for (int k = 0; k < d; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      p[kk] = s.source[i][kk] - m.source_mean[kk];
      q[kk] = s.target[i][kk] - m.target_mean[kk];
    }
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        m.cross(a, b) += p[static_cast<std::size_t>(a)] * q[static_cast<std::size_t>(b)];
        m.source_scatter(a, b) += p[static_cast<std::size_t>(a)] * p[static_cast<std::size_t>(b)];
      }
  }
  m.source_variance = m.source_scatter.trace();
  return m;
}

inline Vec translation_for(const Matrix& linear, const Vec& source_mean, const Vec& target_mean, int d) {
  Vec t = linear * source_mean;
  for (int k = 0; k < d; ++k) t[static_cast<std::size_t>(k)] = target_mean[static_cast<std::size_t>(k)] - t[static_cast<std::size_t>(k)];
  return t;
}

}  // namespace detail

/// Least-squares rotation (optionally with uniform scale) and translation
/// taking `source` onto `target`. The rotation comes from the SVD of the
/// centred cross-covariance H = U S V^T as R = V diag(1, .., det(V U^T)) U^T,
/// which keeps det R = +1 even when the unconstrained optimum is a reflection.
inline Transform solve_rigid(const PairedSample& s, bool with_scale) {
  const int d = s.dim();
  if (s.size() < static_cast<std::size_t>(d))
    throw DegenerateSample("rigid alignment needs at least " + std::to_string(d) + " pairs");
  const detail::CenteredMoments mom = detail::centered_moments(s);
  const Svd svd = small_svd(mom.cross);

  const double reflect = (svd.v * svd.u.transposed()).determinant() < 0.0 ? -1.0 : 1.0;
  Matrix correction = Matrix::identity(d);
  correction(d - 1, d - 1) = reflect;
  Matrix rotation = svd.v * correction * svd.u.transposed();

  double scale = 1.0;
  if (with_scale) {
    if (!(mom.source_variance > 0.0)) throw DegenerateSample("zero source variance: scale is undefined");
    double num = 0.0;
    for (int k = 0; k < d; ++k) num += svd.singular[static_cast<std::size_t>(k)] * correction(k, k);
    scale = num / mom.source_variance;
    if (!(scale > 0.0)) throw DegenerateSample("non-positive optimal scale");
  }
  const Vec t = detail::translation_for(scale * rotation, mom.source_mean, mom.target_mean, d);
  return with_scale ? Transform::rigid_scale(rotation, scale, t) : Transform::rigid(rotation, t);
}

/// Least-squares affine map via the normal equations on centred coordinates:
/// A = (sum q p^T)(sum p p^T)^-1, t = q̄ - A p̄.
inline Transform solve_affine(const PairedSample& s) {
  const int d = s.dim();
  if (s.size() < static_cast<std::size_t>(d + 1))
    throw DegenerateSample("affine alignment needs at least " + std::to_string(d + 1) + " pairs");
  const detail::CenteredMoments mom = detail::centered_moments(s);
  const SymmetricEigen eig = jacobi_eigen(mom.source_scatter);
  const double largest = eig.values[0];
  const double smallest = eig.values[static_cast<std::size_t>(d - 1)];
  if (!(largest > 0.0) || smallest <= 1e-12 * largest)
    throw DegenerateSample("source points do not affinely span the space (rank-deficient normal matrix)");
  const Matrix linear = mom.cross.transposed() * mom.source_scatter.inverse();
  return Transform::affine(linear, detail::translation_for(linear, mom.source_mean, mom.target_mean, d));
}

inline Transform solve_transform(const PairedSample& s, TransformKind kind) {
  switch (kind) {
    case TransformKind::rigid: return solve_rigid(s, false);
    case TransformKind::rigid_scale: return solve_rigid(s, true);
    case TransformKind::affine: return solve_affine(s);
  }
  throw std::invalid_argument("unknown transform kind");
}

}  // namespace ficp

#endif  // FICP_ALIGNMENT_HPP
