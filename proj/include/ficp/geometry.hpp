#ifndef FICP_GEOMETRY_HPP
#define FICP_GEOMETRY_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ficp {

inline constexpr int kMaxDim = 3;

/// Thrown when two objects that must share a dimension do not.
class DimensionMismatch : public std::invalid_argument {
public:
  DimensionMismatch(int expected, int actual)
      : std::invalid_argument("dimension mismatch: expected " + std::to_string(expected) +
                              ", got " + std::to_string(actual)) {}
};

inline void require_dim(int expected, int actual) {
  if (expected != actual) throw DimensionMismatch(expected, actual);
}

inline void require_supported_dim(int dim) {
  if (dim < 1 || dim > kMaxDim)
    throw std::invalid_argument("unsupported dimension " + std::to_string(dim) + " (expected 1..3)");
}

/// Fixed-capacity vector of up to three coordinates; the active length is carried
/// by whatever owns it (a PointSet or Transform).
using Vec = std::array<double, kMaxDim>;

/// Square matrix of order dim <= 3, stored row-major in a 3x3 block.
struct Matrix {
  int dim = 0;
  std::array<double, kMaxDim * kMaxDim> a{};

  Matrix() = default;
  explicit Matrix(int d) : dim(d) {}

  static Matrix zero(int d) { return Matrix(d); }

  static Matrix identity(int d) {
    Matrix m(d);
    for (int i = 0; i < d; ++i) m(i, i) = 1.0;
    return m;
  }

  /// Row-major initializer; the number of entries must be a perfect square <= 9.
  static Matrix from_rows(int d, std::initializer_list<double> rows) {
    if (static_cast<int>(rows.size()) != d * d) throw std::invalid_argument("matrix entry count");
    Matrix m(d);
    int k = 0;
    for (double v : rows) {
      m(k / d, k % d) = v;
      ++k;
    }
    return m;
  }

  /// Counter-clockwise planar rotation.
  static Matrix rotation2d(double radians) {
    const double c = std::cos(radians), s = std::sin(radians);
    return from_rows(2, {c, -s, s, c});
  }

  /// Rodrigues rotation about a (not necessarily unit) axis.
  static Matrix rotation3d(Vec axis, double radians) {
    const double n = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
    if (n == 0.0) throw std::invalid_argument("zero rotation axis");
    const double x = axis[0] / n, y = axis[1] / n, z = axis[2] / n;
    const double c = std::cos(radians), s = std::sin(radians), t = 1.0 - c;
    return from_rows(3, {t * x * x + c, t * x * y - s * z, t * x * z + s * y,
                         t * x * y + s * z, t * y * y + c, t * y * z - s * x,
                         t * x * z - s * y, t * y * z + s * x, t * z * z + c});
  }

  double& operator()(int r, int c) { return a[static_cast<std::size_t>(r * kMaxDim + c)]; }
  double operator()(int r, int c) const { return a[static_cast<std::size_t>(r * kMaxDim + c)]; }

  Matrix transposed() const {
    Matrix t(dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  double determinant() const {
    const Matrix& m = *this;
    switch (dim) {
      case 1: return m(0, 0);
      case 2: return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
      case 3:
        return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
               m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
               m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
      default: return 0.0;
    }
  }

  double trace() const {
    double t = 0.0;
    for (int i = 0; i < dim; ++i) t += (*this)(i, i);
    return t;
  }

  /// Largest absolute entry of M^T M - I.
  double orthogonality_error() const {
    const Matrix p = transposed() * (*this);
    double err = 0.0;
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) err = std::max(err, std::abs(p(i, j) - (i == j ? 1.0 : 0.0)));
    return err;
  }

  Matrix inverse() const;

  Vec operator*(const Vec& v) const {
    Vec out{};
    for (int i = 0; i < dim; ++i) {
      double s = 0.0;
      for (int j = 0; j < dim; ++j) s += (*this)(i, j) * v[static_cast<std::size_t>(j)];
      out[static_cast<std::size_t>(i)] = s;
    }
    return out;
  }

  friend Matrix operator*(const Matrix& x, const Matrix& y) {
    require_dim(x.dim, y.dim);
    Matrix out(x.dim);
    for (int i = 0; i < x.dim; ++i)
      for (int j = 0; j < x.dim; ++j) {
        double s = 0.0;
        for (int k = 0; k < x.dim; ++k) s += x(i, k) * y(k, j);
        out(i, j) = s;
      }
    return out;
  }

  friend Matrix operator*(double s, Matrix m) {
    for (double& v : m.a) v *= s;
    return m;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

inline Matrix Matrix::inverse() const {
  const double det = determinant();
  if (det == 0.0 || !std::isfinite(det)) throw std::domain_error("singular matrix");
  const Matrix& m = *this;
  Matrix inv(dim);
  switch (dim) {
    case 1: inv(0, 0) = 1.0 / m(0, 0); break;
    case 2:
      inv(0, 0) = m(1, 1) / det;
      inv(0, 1) = -m(0, 1) / det;
      inv(1, 0) = -m(1, 0) / det;
      inv(1, 1) = m(0, 0) / det;
      break;
    case 3:
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          // cofactor of (j, i)
          const int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
          inv(i, j) = (m(r0, c0) * m(r1, c1) - m(r0, c1) * m(r1, c0)) / det;
        }
      break;
    default: throw std::domain_error("singular matrix");
  }
  return inv;
}

/// Ordered, dimension-tagged collection of points. Coordinates are stored
/// contiguously (point-major) so that a point is a span of `dim()` doubles.
class PointSet {
public:
  PointSet() = default;
  explicit PointSet(int dim) : dim_(dim) { require_supported_dim(dim); }

  PointSet(int dim, std::vector<double> coords) : dim_(dim), coords_(std::move(coords)) {
    require_supported_dim(dim);
    if (coords_.size() % static_cast<std::size_t>(dim) != 0)
      throw std::invalid_argument("coordinate count is not a multiple of the dimension");
    for (double v : coords_)
      if (!std::isfinite(v)) throw std::invalid_argument("non-finite coordinate");
  }

  PointSet(int dim, std::initializer_list<std::initializer_list<double>> points) : PointSet(dim) {
    for (const auto& p : points) push_back(std::span<const double>(p.begin(), p.size()));
  }

  int dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / static_cast<std::size_t>(dim_); }
  bool empty() const { return coords_.empty(); }

  std::span<const double> operator[](std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  std::span<double> mutable_point(std::size_t i) {
    return {coords_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }

  Vec vec(std::size_t i) const {
    Vec v{};
    std::copy_n(coords_.data() + i * static_cast<std::size_t>(dim_), dim_, v.begin());
    return v;
  }

  void push_back(std::span<const double> p) {
    require_dim(dim_, static_cast<int>(p.size()));
    for (double v : p)
      if (!std::isfinite(v)) throw std::invalid_argument("non-finite coordinate");
    coords_.insert(coords_.end(), p.begin(), p.end());
  }
  void push_back(const Vec& v) { push_back(std::span<const double>(v.data(), static_cast<std::size_t>(dim_))); }

  void reserve(std::size_t n) { coords_.reserve(n * static_cast<std::size_t>(dim_)); }

  const std::vector<double>& coords() const { return coords_; }

  Vec centroid() const {
    Vec c{};
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i)
      for (int k = 0; k < dim_; ++k) c[static_cast<std::size_t>(k)] += (*this)[i][static_cast<std::size_t>(k)];
    if (n > 0)
      for (int k = 0; k < dim_; ++k) c[static_cast<std::size_t>(k)] /= static_cast<double>(n);
    return c;
  }

  /// Points at the given indices, in the given order.
  PointSet subset(std::span<const std::size_t> indices) const {
    PointSet out(dim_);
    out.reserve(indices.size());
    for (std::size_t i : indices) out.coords_.insert(out.coords_.end(), (*this)[i].begin(), (*this)[i].end());
    return out;
  }

  friend bool operator==(const PointSet&, const PointSet&) = default;

private:
  int dim_ = 0;
  std::vector<double> coords_;
};

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

inline double distance(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(squared_distance(a, b));
}

enum class TransformKind { rigid, rigid_scale, affine };

inline const char* to_string(TransformKind k) {
  switch (k) {
    case TransformKind::rigid: return "rigid";
    case TransformKind::rigid_scale: return "rigid-scale";
    case TransformKind::affine: return "affine";
  }
  return "?";
}

inline TransformKind parse_transform_kind(const std::string& s) {
  if (s == "rigid") return TransformKind::rigid;
  if (s == "rigid-scale") return TransformKind::rigid_scale;
  if (s == "affine") return TransformKind::affine;
  throw std::invalid_argument("unknown transform kind '" + s + "'");
}

/// x -> s * L * x + t. For rigid kinds L is a proper rotation and s is kept
/// apart from it; affine transforms carry the whole linear map in L with s = 1.
class Transform {
public:
  static constexpr double kOrthogonalityTolerance = 1e-9;

  Transform() = default;

  static Transform identity(int dim, TransformKind kind = TransformKind::rigid) {
    require_supported_dim(dim);
    return Transform(kind, Matrix::identity(dim), Vec{}, 1.0);
  }

  static Transform rigid(const Matrix& rotation, const Vec& translation) {
    return Transform(TransformKind::rigid, rotation, translation, 1.0);
  }
  static Transform rigid_scale(const Matrix& rotation, double scale, const Vec& translation) {
    return Transform(TransformKind::rigid_scale, rotation, translation, scale);
  }
  static Transform affine(const Matrix& linear, const Vec& translation) {
    return Transform(TransformKind::affine, linear, translation, 1.0);
  }
  static Transform translation(int dim, const Vec& t) { return rigid(Matrix::identity(dim), t); }

  TransformKind kind() const { return kind_; }
  int dim() const { return linear_.dim; }
  /// Rotation (rigid kinds) or full linear map (affine).
  const Matrix& linear() const { return linear_; }
  const Vec& translation_vector() const { return translation_; }
  double scale() const { return scale_; }

  /// s * L
  Matrix effective_linear() const { return scale_ == 1.0 ? linear_ : scale_ * linear_; }

  Vec apply(const Vec& p) const {
    Vec out = linear_ * p;
    for (int k = 0; k < dim(); ++k)
      out[static_cast<std::size_t>(k)] = scale_ * out[static_cast<std::size_t>(k)] + translation_[static_cast<std::size_t>(k)];
    return out;
  }

  Vec apply(std::span<const double> p) const {
    require_dim(dim(), static_cast<int>(p.size()));
    Vec v{};
    std::copy(p.begin(), p.end(), v.begin());
    return apply(v);
  }

  Transform inverse() const {
    if (kind_ == TransformKind::affine) {
      const Matrix inv = linear_.inverse();
      Vec t = inv * translation_;
      for (double& v : t) v = -v;
      return affine(inv, t);
    }
    const Matrix rt = linear_.transposed();
    Vec t = rt * translation_;
    for (int k = 0; k < dim(); ++k) t[static_cast<std::size_t>(k)] = -t[static_cast<std::size_t>(k)] / scale_;
    return Transform(kind_, rt, t, 1.0 / scale_);
  }

private:
  Transform(TransformKind kind, const Matrix& linear, const Vec& translation, double scale)
      : kind_(kind), linear_(linear), translation_(translation), scale_(scale) {
    require_supported_dim(linear.dim);
    for (int k = linear.dim; k < kMaxDim; ++k) translation_[static_cast<std::size_t>(k)] = 0.0;
    for (int i = 0; i < linear.dim; ++i) {
      if (!std::isfinite(translation_[static_cast<std::size_t>(i)])) throw std::invalid_argument("non-finite translation");
      for (int j = 0; j < linear.dim; ++j)
        if (!std::isfinite(linear(i, j))) throw std::invalid_argument("non-finite linear part");
    }
    if (kind != TransformKind::affine) {
      if (linear.orthogonality_error() > kOrthogonalityTolerance ||
          std::abs(linear.determinant() - 1.0) > kOrthogonalityTolerance)
        throw std::invalid_argument("rotation part is not a proper orthogonal matrix");
      if (!(scale > 0.0) || !std::isfinite(scale)) throw std::invalid_argument("scale must be positive");
      if (kind == TransformKind::rigid && scale != 1.0) throw std::invalid_argument("rigid transform with scale");
    }
  }

  TransformKind kind_ = TransformKind::rigid;
  Matrix linear_ = Matrix::identity(1);
  Vec translation_{};
  double scale_ = 1.0;
};

/// Kind of outer ∘ inner: affine absorbs everything, otherwise scale is contagious.
inline TransformKind composed_kind(TransformKind outer, TransformKind inner) {
  if (outer == TransformKind::affine || inner == TransformKind::affine) return TransformKind::affine;
  if (outer == TransformKind::rigid_scale || inner == TransformKind::rigid_scale) return TransformKind::rigid_scale;
  return TransformKind::rigid;
}

/// x -> outer(inner(x))
inline Transform compose(const Transform& outer, const Transform& inner) {
  require_dim(outer.dim(), inner.dim());
  const TransformKind kind = composed_kind(outer.kind(), inner.kind());
  Vec t = outer.effective_linear() * inner.translation_vector();
  for (int k = 0; k < outer.dim(); ++k)
    t[static_cast<std::size_t>(k)] += outer.translation_vector()[static_cast<std::size_t>(k)];
  switch (kind) {
    case TransformKind::affine:
      return Transform::affine(outer.effective_linear() * inner.effective_linear(), t);
    case TransformKind::rigid_scale:
      return Transform::rigid_scale(outer.linear() * inner.linear(), outer.scale() * inner.scale(), t);
    case TransformKind::rigid:
      return Transform::rigid(outer.linear() * inner.linear(), t);
  }
  return Transform::affine(outer.effective_linear() * inner.effective_linear(), t);
}

inline PointSet apply_transform(const Transform& t, const PointSet& ps) {
  require_dim(t.dim(), ps.dim());
  PointSet out(ps.dim());
  out.reserve(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i) out.push_back(t.apply(ps.vec(i)));
  return out;
}

/// Rotation angle (radians) of a rigid linear part: planar angle for d=2,
/// axis-angle magnitude for d=3, 0 for d=1.
inline double rotation_angle(const Matrix& r) {
  switch (r.dim) {
    case 2: return std::abs(std::atan2(r(1, 0), r(0, 0)));
    case 3: return std::acos(std::clamp((r.trace() - 1.0) / 2.0, -1.0, 1.0));
    default: return 0.0;
  }
}

/// Angle of the rotation taking `truth` to `estimate`.
inline double rotation_error(const Matrix& estimate, const Matrix& truth) {
  return rotation_angle(estimate * truth.transposed());
}

struct BoundingBox {
  Vec min{};
  Vec max{};
  int dim = 0;

  double volume() const {
    double v = 1.0;
    for (int k = 0; k < dim; ++k) v *= max[static_cast<std::size_t>(k)] - min[static_cast<std::size_t>(k)];
    return v;
  }
  bool contains(std::span<const double> p) const {
    for (int k = 0; k < dim; ++k)
      if (p[static_cast<std::size_t>(k)] < min[static_cast<std::size_t>(k)] ||
          p[static_cast<std::size_t>(k)] > max[static_cast<std::size_t>(k)])
        return false;
    return true;
  }
};

inline BoundingBox bounding_box(const PointSet& ps) {
  if (ps.empty()) throw std::invalid_argument("bounding box of an empty point set");
  BoundingBox box;
  box.dim = ps.dim();
  box.min = box.max = ps.vec(0);
  for (std::size_t i = 1; i < ps.size(); ++i)
    for (int k = 0; k < ps.dim(); ++k) {
      const auto kk = static_cast<std::size_t>(k);
      box.min[kk] = std::min(box.min[kk], ps[i][kk]);
      box.max[kk] = std::max(box.max[kk], ps[i][kk]);
    }
  return box;
}

}  // namespace ficp

#endif  // FICP_GEOMETRY_HPP
