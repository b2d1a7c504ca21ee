#ifndef FICP_SYNTH_HPP
#define FICP_SYNTH_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ficp/geometry.hpp"
#include "ficp/random.hpp"

namespace ficp {

/// Parameters of the generative model: inliers are model points plus isotropic
/// Gaussian noise, model outliers come from a Poisson process of density omega.
struct NoiseModelParams {
  double sigma = 1.0;
  double omega = 0.0;
  double p_inlier = 1.0;
  int dim = 2;
  std::uint64_t seed = 0;

  double p_outlier() const { return 1.0 - p_inlier; }

  void validate() const {
    if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be non-negative");
    if (!(omega >= 0.0)) throw std::invalid_argument("omega must be non-negative");
    if (!(p_inlier > 0.0) || p_inlier > 1.0) throw std::invalid_argument("p_inlier must lie in (0, 1]");
    require_supported_dim(dim);
  }
};

enum class OutlierType { occlusion, deformation, new_data };

inline const char* to_string(OutlierType t) {
  switch (t) {
    case OutlierType::occlusion: return "occlusion";
    case OutlierType::deformation: return "deformation";
    case OutlierType::new_data: return "new-data";
  }
  return "?";
}

inline OutlierType parse_outlier_type(const std::string& s) {
  if (s == "occlusion") return OutlierType::occlusion;
  if (s == "deformation") return OutlierType::deformation;
  if (s == "new-data") return OutlierType::new_data;
  throw std::invalid_argument("unknown outlier type '" + s + "'");
}

inline void require_target_fraction(double p) {
  if (!(p > 0.0) || p > 1.0) throw std::invalid_argument("target inlier fraction must lie in (0, 1]");
}

namespace detail {

inline Vec random_unit(Rng& rng, int dim) {
  for (;;) {
    Vec v{};
    double n2 = 0.0;
    for (int k = 0; k < dim; ++k) {
      v[static_cast<std::size_t>(k)] = rng.normal();
      n2 += v[static_cast<std::size_t>(k)] * v[static_cast<std::size_t>(k)];
    }
    if (n2 > 1e-20) {
      const double inv = 1.0 / std::sqrt(n2);
      for (int k = 0; k < dim; ++k) v[static_cast<std::size_t>(k)] *= inv;
      return v;
    }
  }
}

struct Ball {
  Vec center{};
  double radius = 0.0;
  std::vector<std::size_t> inside;  // ascending
};

/// Finds a ball centred on a random cloud point holding `want` points, by
/// bisection on the radius. Accepts any ball whose count is within
/// `slack` points of `want`; retries other centres before giving up.
inline Ball ball_with_count(const PointSet& ps, std::size_t want, std::size_t slack, Rng& rng) {
  const std::size_t n = ps.size();
  constexpr int kCenters = 32;
  for (int attempt = 0; attempt < kCenters; ++attempt) {
    const Vec c = ps.vec(rng.index(n));
    std::vector<double> dist(n);
    double hi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      dist[i] = distance(ps[i], std::span<const double>(c.data(), static_cast<std::size_t>(ps.dim())));
      hi = std::max(hi, dist[i]);
    }
    const auto count = [&](double r) {
      return static_cast<std::size_t>(std::count_if(dist.begin(), dist.end(), [r](double d) { return d <= r; }));
    };
    double lo = 0.0;
    double r = hi;
    std::size_t got = count(r);
    for (int it = 0; it < 200 && got != want; ++it) {
      r = 0.5 * (lo + hi);
      got = count(r);
      if (got > want) hi = r;
      else lo = r;
      if (hi - lo <= 1e-15 * std::max(1.0, hi)) break;
    }
    const std::size_t err = got > want ? got - want : want - got;
    if (err <= slack) {
      Ball b;
      b.center = c;
      b.radius = r;
      for (std::size_t i = 0; i < n; ++i)
        if (dist[i] <= r) b.inside.push_back(i);
      return b;
    }
  }
  throw std::domain_error("target inlier fraction is unreachable for this point set");
}

inline std::size_t slack_for(std::size_t n) {
  return static_cast<std::size_t>(std::floor(0.02 * static_cast<double>(n)));
}

}  // namespace detail

/// Each point displaced by an independent isotropic N(0, sigma^2) vector.
inline PointSet perturb_gaussian(const PointSet& ps, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be non-negative");
  if (sigma == 0.0) return ps;
  Rng rng(seed);
  PointSet out(ps.dim());
  out.reserve(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    Vec p = ps.vec(i);
    for (int k = 0; k < ps.dim(); ++k) p[static_cast<std::size_t>(k)] += sigma * rng.normal();
    out.push_back(p);
  }
  return out;
}

struct OcclusionResult {
  PointSet model;
  std::vector<std::size_t> removed;
  Vec center{};
  double radius = 0.0;
};

/// Removes every model point inside a random ball sized so that the fraction
/// of surviving points is within 0.02 of the target.
inline OcclusionResult apply_occlusion(const PointSet& m, double target_p_inlier, std::uint64_t seed) {
  require_target_fraction(target_p_inlier);
  if (m.empty()) throw std::invalid_argument("cannot occlude an empty set");
  const std::size_t n = m.size();
  const auto want = static_cast<std::size_t>(std::llround((1.0 - target_p_inlier) * static_cast<double>(n)));
  if (want == 0) return {m, {}, {}, 0.0};
  Rng rng(seed);
  detail::Ball ball = detail::ball_with_count(m, want, detail::slack_for(n), rng);
  if (ball.inside.size() >= n) throw std::domain_error("occlusion would remove every point");
  OcclusionResult out{PointSet(m.dim()), std::move(ball.inside), ball.center, ball.radius};
  std::vector<bool> drop(n, false);
  for (std::size_t i : out.removed) drop[i] = true;
  for (std::size_t i = 0; i < n; ++i)
    if (!drop[i]) out.model.push_back(m[i]);
  return out;
}

struct DeformationResult {
  PointSet data;
  std::vector<std::size_t> moved;
  Vec center{};
  double radius = 0.0;
};

/// Shifts the points of a random ball by a shared random direction of length
/// `shift_scale` plus a per-point jitter of length at most shift_scale / 2,
/// so every moved point travels at least shift_scale / 2.
inline DeformationResult apply_deformation(const PointSet& d, double target_p_inlier, double shift_scale,
                                           std::uint64_t seed) {
  require_target_fraction(target_p_inlier);
  if (!(shift_scale > 0.0)) throw std::invalid_argument("shift_scale must be positive");
  if (d.empty()) throw std::invalid_argument("cannot deform an empty set");
  const std::size_t n = d.size();
  const auto want = static_cast<std::size_t>(std::llround((1.0 - target_p_inlier) * static_cast<double>(n)));
  if (want == 0) return {d, {}, {}, 0.0};
  Rng rng(seed);
  detail::Ball ball = detail::ball_with_count(d, want, detail::slack_for(n), rng);
  const Vec shared = detail::random_unit(rng, d.dim());
  DeformationResult out{d, std::move(ball.inside), ball.center, ball.radius};
  for (std::size_t i : out.moved) {
    const Vec jitter_dir = detail::random_unit(rng, d.dim());
    const double jitter = 0.5 * shift_scale * rng.uniform();
    auto p = out.data.mutable_point(i);
    for (int k = 0; k < d.dim(); ++k) {
      const auto kk = static_cast<std::size_t>(k);
      p[kk] += shift_scale * shared[kk] + jitter * jitter_dir[kk];
    }
  }
  return out;
}

struct NewDataResult {
  PointSet data;
  std::vector<std::size_t> added;
};

/// Appends k = round(|D| (1/p - 1)) points uniform in the bounding box of D.
inline NewDataResult apply_new_data(const PointSet& d, double target_p_inlier, std::uint64_t seed) {
  require_target_fraction(target_p_inlier);
  const BoundingBox box = bounding_box(d);
  const auto k = static_cast<std::size_t>(
      std::llround(static_cast<double>(d.size()) * (1.0 / target_p_inlier - 1.0)));
  NewDataResult out{d, {}};
  out.data.reserve(d.size() + k);
  Rng rng(seed);
  for (std::size_t j = 0; j < k; ++j) {
    Vec p{};
    for (int a = 0; a < d.dim(); ++a) {
      const auto aa = static_cast<std::size_t>(a);
      p[aa] = rng.uniform(box.min[aa], box.max[aa]);
    }
    out.added.push_back(out.data.size());
    out.data.push_back(p);
  }
  return out;
}

/// Spatial Poisson process of intensity omega restricted to the box.
inline PointSet generate_model_outliers(const BoundingBox& box, double omega, std::uint64_t seed) {
  if (!(omega >= 0.0)) throw std::invalid_argument("omega must be non-negative");
  PointSet out(box.dim);
  if (omega == 0.0) return out;
  const double volume = box.volume();
  if (!(volume > 0.0)) throw std::invalid_argument("degenerate box for the outlier process");
  Rng rng(seed);
  const std::uint64_t count = rng.poisson(omega * volume);
  out.reserve(count);
  for (std::uint64_t j = 0; j < count; ++j) {
    Vec p{};
    for (int a = 0; a < box.dim; ++a) {
      const auto aa = static_cast<std::size_t>(a);
      p[aa] = rng.uniform(box.min[aa], box.max[aa]);
    }
    out.push_back(p);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Built-in shapes

/// `n` points along an elongated, asymmetric closed planar contour (a rough
/// fish outline), spaced uniformly by arc length with unit spacing.
inline PointSet make_curve(std::size_t n) {
  if (n < 3) throw std::invalid_argument("curve needs at least 3 points");
  constexpr int kDense = 20000;
  const auto outline = [](double t) {
    const double body = 0.32 * std::sin(t) * (1.0 + 0.4 * std::cos(t));
    const double fin = 0.12 * std::exp(-std::pow((t - 1.2) / 0.25, 2.0));
    const double tail = 0.18 * std::sin(3.0 * t) * std::exp(-std::pow((std::abs(t - std::numbers::pi) - 0.35) / 0.3, 2.0));
    return std::array<double, 2>{std::cos(t), body + fin + tail};
  };
  std::vector<std::array<double, 2>> dense(kDense + 1);
  std::vector<double> arc(kDense + 1, 0.0);
  for (int i = 0; i <= kDense; ++i) {
    dense[static_cast<std::size_t>(i)] = outline(2.0 * std::numbers::pi * i / kDense);
    if (i > 0) {
      const auto& a = dense[static_cast<std::size_t>(i - 1)];
      const auto& b = dense[static_cast<std::size_t>(i)];
      arc[static_cast<std::size_t>(i)] = arc[static_cast<std::size_t>(i - 1)] + std::hypot(b[0] - a[0], b[1] - a[1]);
    }
  }
  const double scale = static_cast<double>(n) / arc.back();
  PointSet out(2);
  out.reserve(n);
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = arc.back() * static_cast<double>(i) / static_cast<double>(n);
    while (arc[j + 1] < s) ++j;
    const double u = (s - arc[j]) / (arc[j + 1] - arc[j]);
    out.push_back(Vec{scale * (dense[j][0] + u * (dense[j + 1][0] - dense[j][0])),
                      scale * (dense[j][1] + u * (dense[j + 1][1] - dense[j][1])), 0.0});
  }
  return out;
}

/// `n` points spread over a bumpy closed surface (Fibonacci lattice on a
/// radially modulated sphere).
inline PointSet make_blob(std::size_t n) {
  if (n < 4) throw std::invalid_argument("blob needs at least 4 points");
  PointSet out(3);
  out.reserve(n);
  const double radius = std::sqrt(static_cast<double>(n) / (4.0 * std::numbers::pi));
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (std::size_t i = 0; i < n; ++i) {
    const double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    const double rho = std::sqrt(1.0 - z * z);
    const double th = golden_angle * static_cast<double>(i);
    const double x = rho * std::cos(th), y = rho * std::sin(th);
    const double bump = 1.0 + 0.2 * x * y + 0.15 * z * z * z + 0.1 * std::sin(3.0 * x);
    out.push_back(Vec{1.3 * radius * bump * x, radius * bump * y, 0.8 * radius * bump * z});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Full instances

struct SynthesisParams {
  PointSet base;
  OutlierType outlier = OutlierType::occlusion;
  double p_inlier = 1.0;
  double sigma = 0.0;
  double rotate_deg = 0.0;
  std::optional<double> shift_scale;  // deformation; defaults to 5 sigma
  double omega = 0.0;                 // model outlier density
  std::uint64_t seed = 0;
};

struct SynthesisRecord {
  PointSet data;
  PointSet model;
  Transform true_transform;  // maps data onto model
  std::vector<bool> inlier_flags;
  double effective_inlier_fraction = 1.0;
};

/// Rotation by `degrees` about `center` (random axis in 3D).
inline Transform rotation_about(const Vec& center, int dim, double degrees, Rng& rng) {
  const double rad = degrees * std::numbers::pi / 180.0;
  Matrix r = Matrix::identity(dim);
  if (dim == 2) r = Matrix::rotation2d(rad);
  else if (dim == 3) r = Matrix::rotation3d(detail::random_unit(rng, 3), rad);
  Vec t = r * center;
  for (int k = 0; k < dim; ++k) t[static_cast<std::size_t>(k)] = center[static_cast<std::size_t>(k)] - t[static_cast<std::size_t>(k)];
  return Transform::rigid(r, t);
}

/// Copies the base shape into D and M, injects outliers of the requested
/// type, adds Gaussian noise and model outliers, then rotates D about its
/// centroid. The recorded transform takes D back onto M.
inline SynthesisRecord synthesize(const SynthesisParams& p) {
  require_target_fraction(p.p_inlier);
  if (!(p.sigma >= 0.0)) throw std::invalid_argument("sigma must be non-negative");
  if (p.base.size() < 3) throw std::invalid_argument("base shape needs at least 3 points");
  enum Stream : std::uint64_t { kOutliers = 1, kNoise, kModelOutliers, kRotation };

  SynthesisRecord rec;
  PointSet data = p.base;
  rec.model = p.base;
  rec.inlier_flags.assign(p.base.size(), true);

  switch (p.outlier) {
    case OutlierType::occlusion: {
      OcclusionResult occ = apply_occlusion(p.base, p.p_inlier, derive_seed(p.seed, {kOutliers}));
      rec.model = std::move(occ.model);
      for (std::size_t i : occ.removed) rec.inlier_flags[i] = false;
      break;
    }
    case OutlierType::deformation: {
      const double shift = p.shift_scale.value_or(5.0 * p.sigma);
      if (p.p_inlier < 1.0 && !(shift > 0.0))
        throw std::invalid_argument("deformation needs a positive shift (set shift_scale or sigma)");
      if (p.p_inlier < 1.0) {
        DeformationResult def = apply_deformation(p.base, p.p_inlier, shift, derive_seed(p.seed, {kOutliers}));
        data = std::move(def.data);
        for (std::size_t i : def.moved) rec.inlier_flags[i] = false;
      }
      break;
    }
    case OutlierType::new_data: {
      NewDataResult nd = apply_new_data(p.base, p.p_inlier, derive_seed(p.seed, {kOutliers}));
      data = std::move(nd.data);
      rec.inlier_flags.resize(data.size(), false);
      break;
    }
  }

  if (p.omega > 0.0) {
    const PointSet extra = generate_model_outliers(bounding_box(rec.model), p.omega, derive_seed(p.seed, {kModelOutliers}));
    for (std::size_t i = 0; i < extra.size(); ++i) rec.model.push_back(extra[i]);
  }

  data = perturb_gaussian(data, p.sigma, derive_seed(p.seed, {kNoise}));

  Rng rot_rng(derive_seed(p.seed, {kRotation}));
  const Transform rot = rotation_about(data.centroid(), data.dim(), p.rotate_deg, rot_rng);
  rec.data = p.rotate_deg == 0.0 ? std::move(data) : apply_transform(rot, data);
  rec.true_transform = rot.inverse();

  const auto inliers = std::count(rec.inlier_flags.begin(), rec.inlier_flags.end(), true);
  rec.effective_inlier_fraction = static_cast<double>(inliers) / static_cast<double>(rec.inlier_flags.size());
  return rec;
}

}  // namespace ficp

#endif  // FICP_SYNTH_HPP
