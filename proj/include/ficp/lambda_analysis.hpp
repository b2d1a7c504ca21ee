#ifndef FICP_LAMBDA_ANALYSIS_HPP
#define FICP_LAMBDA_ANALYSIS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ficp/quadrature.hpp"
#include "ficp/synth.hpp"

// Statistical model of nearest-neighbour residuals under Gaussian inlier
// noise and Poisson-distributed model outliers, and the value of the FRMSD
// exponent for which the optimal fraction cuts exactly at the distance where
// inlier and outlier matches are equally likely.

namespace ficp {

/// Gamma at positive integers and half-integers, by the factorial and
/// double-factorial recurrences.
inline double gamma_half_integer(double x) {
  const double twice = 2.0 * x;
  if (!(x > 0.0) || twice != std::round(twice) || twice > 340.0)
    throw std::domain_error("gamma_half_integer: argument must be a positive half-integer");
  const auto k = static_cast<long>(std::llround(twice));
  if (k % 2 == 0) {
    // Γ(n) = (n-1)!
    double r = 1.0;
    for (long i = 2; i < k / 2; ++i) r *= static_cast<double>(i);
    return r;
  }
  // Γ(n + 1/2) = √π · 1·3·5···(2n-1) / 2^n
  const long n = (k - 1) / 2;
  double r = std::sqrt(std::numbers::pi);
  for (long i = 1; i <= n; ++i) r *= static_cast<double>(2 * i - 1) / 2.0;
  return r;
}

/// Surface area of the unit sphere in d dimensions: 2 π^{d/2} / Γ(d/2).
inline double unit_sphere_surface(int d) {
  if (d < 1 || d > 3) throw std::domain_error("unit_sphere_surface: d must be 1, 2 or 3");
  return 2.0 * std::pow(std::numbers::pi, d / 2.0) / gamma_half_integer(d / 2.0);
}

/// ω_max = (√(2π) σ)^-d, the largest outlier density with a critical distance.
inline double omega_max(double sigma, int d) { return std::pow(std::sqrt(2.0 * std::numbers::pi) * sigma, -d); }

namespace detail {
inline void require_sigma(const NoiseModelParams& p) {
  if (!(p.sigma > 0.0)) throw std::domain_error("sigma must be positive for the density model");
  if (p.dim < 1 || p.dim > 3) throw std::domain_error("density model supports d = 1, 2, 3");
}
}  // namespace detail

/// Density of z = ||n||^2 for n ~ N(0, σ² I_d).
inline double chi_square_density(double z, const NoiseModelParams& p) {
  detail::require_sigma(p);
  if (z < 0.0) throw std::domain_error("chi_square_density: z must be non-negative");
  const double half_d = p.dim / 2.0;
  if (z == 0.0) return p.dim == 2 ? 1.0 / (2.0 * p.sigma * p.sigma) : (p.dim == 1 ? std::numeric_limits<double>::infinity() : 0.0);
  return std::pow(z, half_d - 1.0) / (std::pow(2.0, half_d) * std::pow(p.sigma, p.dim) * gamma_half_integer(half_d)) *
         std::exp(-z / (2.0 * p.sigma * p.sigma));
}

/// Density of the distance to the nearest point of a Poisson process of
/// intensity ω: ω S(d) r^{d-1} exp(-ω S(d) r^d / d).
inline double weibull_nearest_outlier(double r, const NoiseModelParams& p) {
  if (!(p.omega > 0.0)) throw std::domain_error("weibull_nearest_outlier: omega must be positive");
  if (r < 0.0) throw std::domain_error("weibull_nearest_outlier: r must be non-negative");
  const double s = unit_sphere_surface(p.dim);
  return p.omega * s * std::pow(r, p.dim - 1) * std::exp(-p.omega * s * std::pow(r, p.dim) / p.dim);
}

/// Closed-form CDF of the nearest-outlier distance.
inline double outlier_cdf(double r, const NoiseModelParams& p) {
  if (p.omega == 0.0) return 0.0;
  return -std::expm1(-p.omega * unit_sphere_surface(p.dim) * std::pow(r, p.dim) / p.dim);
}

/// Scale of the nearest-outlier Weibull law, (d / (ω S(d)))^{1/d}.
inline double weibull_scale(const NoiseModelParams& p) {
  return std::pow(p.dim / (p.omega * unit_sphere_surface(p.dim)), 1.0 / p.dim);
}

/// Error raised when ω exceeds ω_max; carries the bound.
class DensityLimitError : public std::domain_error {
public:
  explicit DensityLimitError(double limit)
      : std::domain_error("outlier density exceeds omega_max = " + std::to_string(limit)), omega_max_(limit) {}
  double omega_max() const { return omega_max_; }

private:
  double omega_max_;
};

/// ρ(α) = √(-2 ln α): critical distance in units of σ.
inline double normalized_critical_distance(double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0) throw std::domain_error("alpha must lie in (0, 1]");
  return std::sqrt(std::max(0.0, -2.0 * std::log(alpha)));
}

/// r* solving exp(-(r/σ)²/2) = ω σ^d (2π)^{d/2}.
inline double critical_distance(const NoiseModelParams& p) {
  detail::require_sigma(p);
  if (!(p.omega > 0.0)) throw std::domain_error("critical distance is undefined without model outliers (omega = 0)");
  const double limit = omega_max(p.sigma, p.dim);
  if (p.omega > limit) throw DensityLimitError(limit);
  return p.sigma * std::sqrt(std::max(0.0, -2.0 * std::log(std::pow(std::sqrt(2.0 * std::numbers::pi) * p.sigma, p.dim) * p.omega)));
}

/// Densities of the residual model plus the integration range used for
/// anything that integrates "to infinity".
class ModelDensities {
public:
  explicit ModelDensities(const NoiseModelParams& params) : p_(params) {
    params.validate();
    detail::require_sigma(params);
    omega_max_ = ficp::omega_max(p_.sigma, p_.dim);
    surface_ = unit_sphere_surface(p_.dim);
    double reach = 8.0 * p_.sigma;
    if (p_.omega > 0.0) {
      s_weibull_ = weibull_scale(p_);
      // tail mass of the outlier law beyond r_max is exp(-40)
      reach = std::max(reach, s_weibull_ * std::pow(40.0, 1.0 / p_.dim));
      if (p_.omega <= omega_max_) reach = std::max(reach, 2.0 * critical_distance(p_));
    }
    if (p_.omega == 0.0 && p_.p_inlier < 1.0)
      throw std::domain_error("data outliers need a model-outlier process (omega > 0)");
    r_max_ = reach;
  }

  const NoiseModelParams& params() const { return p_; }
  double omega_max() const { return omega_max_; }
  double s_weibull() const { return s_weibull_; }
  double r_max() const { return r_max_; }

  /// 2r g(r²): density of the inlier noise magnitude.
  double inlier_radial_density(double r) const {
    if (r <= 0.0) return p_.dim == 1 ? 2.0 / (std::sqrt(2.0 * std::numbers::pi) * p_.sigma) : 0.0;
    return 2.0 * r * chi_square_density(r * r, p_);
  }

  double outlier_density(double r) const {
    if (p_.omega == 0.0) return 0.0;
    return p_.omega * surface_ * std::pow(r, p_.dim - 1) * std::exp(-p_.omega * surface_ * std::pow(r, p_.dim) / p_.dim);
  }

  double outlier_cdf(double r) const { return ficp::outlier_cdf(r, p_); }

  /// F_I(r) = ∫_0^{r²} g(ζ) dζ, integrated in r so the integrand stays smooth.
  double inlier_cdf(double r) const {
    return simpson([this](double x) { return inlier_radial_density(x); }, 0.0, r);
  }

  /// φ for a known F_I(r).
  double phi_given(double r, double inlier_cdf_r) const {
    const double w = outlier_density(r);
    const double phi_c = inlier_radial_density(r) * (1.0 - outlier_cdf(r)) + (1.0 - inlier_cdf_r) * w;
    return p_.p_inlier * phi_c + p_.p_outlier() * w;
  }

  double phi(double r) const { return phi_given(r, inlier_cdf(r)); }

  struct Moments {
    double mass = 0.0;    // ∫_0^r φ
    double second = 0.0;  // ∫_0^r ρ² φ
  };

  /// Simpson over [0, r]; F_I is carried along the nodes with a Gauss-Legendre
  /// step per node interval.
  Moments moments(double r) const {
    Moments m;
    if (r <= 0.0) return m;
    const int panels = kSimpsonPanels;
    const double h = r / panels;
    double fi = 0.0;
    double x_prev = 0.0;
    for (int i = 0; i <= panels; ++i) {
      const double x = i * h;
      if (i > 0) fi += gauss_legendre5([this](double t) { return inlier_radial_density(t); }, x_prev, x);
      x_prev = x;
      const double v = phi_given(x, fi);
      const double wgt = (i == 0 || i == panels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      m.mass += wgt * v;
      m.second += wgt * x * x * v;
    }
    m.mass *= h / 3.0;
    m.second *= h / 3.0;
    return m;
  }

private:
  NoiseModelParams p_;
  double omega_max_ = 0.0;
  double surface_ = 0.0;
  double s_weibull_ = 0.0;
  double r_max_ = 0.0;
};

/// φ(r) = p_I φ_c(r) + p_O w(r): density of the distance from a data point to
/// its nearest model point.
inline double distance_density(double r, const NoiseModelParams& p) {
  if (r < 0.0) throw std::domain_error("distance_density: r must be non-negative");
  return ModelDensities(p).phi(r);
}

/// f(r) = ∫_0^r φ: expected fraction of data points matched within r.
inline double fraction_of_radius(double r, const NoiseModelParams& p) {
  if (r < 0.0) throw std::domain_error("fraction_of_radius: r must be non-negative");
  return ModelDensities(p).moments(r).mass;
}

/// Ergodic FRMSD estimate at cut-off r: sqrt(f(r)^{-2λ} ∫_0^r ρ² φ).
inline double frmsd_estimate(double r, double lambda, const NoiseModelParams& p) {
  if (!(r > 0.0)) throw std::domain_error("frmsd_estimate: r must be positive");
  const auto m = ModelDensities(p).moments(r);
  if (!(m.mass > 1e-12)) throw std::domain_error("frmsd_estimate: f(r) is numerically zero");
  return std::sqrt(m.second / std::pow(m.mass, 2.0 * lambda));
}

/// Model parameters with σ = 1 and ω = α ω_max.
inline NoiseModelParams normalized_params(double alpha, double p_inlier, int d) {
  NoiseModelParams p;
  p.sigma = 1.0;
  p.dim = d;
  p.p_inlier = p_inlier;
  p.omega = alpha * omega_max(1.0, d);
  return p;
}

/// λ = ½ r*² ∫_0^{r*} φ / ∫_0^{r*} ρ² φ at ω = α ω_max, σ = 1.
inline double solve_lambda(double alpha, double p_inlier, int d) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) throw std::domain_error("solve_lambda: alpha must lie in (0, 1)");
  if (!(p_inlier > 0.0) || p_inlier > 1.0) throw std::domain_error("solve_lambda: p_inlier must lie in (0, 1]");
  if (d < 2 || d > 3) throw std::domain_error("solve_lambda: d must be 2 or 3");
  const NoiseModelParams p = normalized_params(alpha, p_inlier, d);
  const double r_star = normalized_critical_distance(alpha);
  const auto m = ModelDensities(p).moments(r_star);
  return 0.5 * r_star * r_star * m.mass / m.second;
}

}  // namespace ficp

#endif  // FICP_LAMBDA_ANALYSIS_HPP
