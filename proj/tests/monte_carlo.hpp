#ifndef FICP_TESTS_MONTE_CARLO_HPP
#define FICP_TESTS_MONTE_CARLO_HPP

// Monte-Carlo realisation of the residual model: sparse "true" model points,
// data inliers scattered around them with Gaussian noise, a Poisson field of
// model outliers, and data outliers uniform over the interior of the box.
// The nearest-model distances are what the analytic phi describes.

#include <algorithm>
#include <cmath>
#include <vector>

#include "ficp/kdtree.hpp"
#include "ficp/lambda_analysis.hpp"
#include "ficp/synth.hpp"

namespace mc {

struct Residuals {
  std::vector<double> distance;  // ascending
  std::size_t inliers = 0, outliers = 0;

  double fraction_within(double r) const {
    return static_cast<double>(std::upper_bound(distance.begin(), distance.end(), r) - distance.begin()) /
           static_cast<double>(distance.size());
  }
  /// f_emp^-lambda * sqrt(mean over all samples of r_i^2 [r_i <= r]), the sample
  /// counterpart of the analytic estimate.
  double frmsd_within(double r, double lambda) const {
    double s = 0.0;
    std::size_t k = 0;
    for (; k < distance.size() && distance[k] <= r; ++k) s += distance[k] * distance[k];
    const double f = static_cast<double>(k) / static_cast<double>(distance.size());
    return std::sqrt(s / static_cast<double>(distance.size())) / std::pow(f, lambda);
  }
};

inline Residuals simulate(const ficp::NoiseModelParams& p, std::size_t total, std::size_t per_true, std::uint64_t seed) {
  using namespace ficp;
  const int d = p.dim;
  const double s_w = weibull_scale(p);
  // true points stay well apart and their density below 0.5% of omega
  const double spacing = std::max({8.0 * p.sigma, 8.0 * s_w, std::pow(200.0 / p.omega, 1.0 / d)});
  const auto n_in = static_cast<std::size_t>(std::llround(p.p_inlier * static_cast<double>(total)));
  const std::size_t n_out = total - n_in;
  const std::size_t n_true = (n_in + per_true - 1) / per_true;
  std::size_t side = 1;
  while (std::pow(static_cast<double>(side), d) < static_cast<double>(n_true)) ++side;

  BoundingBox box;
  box.dim = d;
  for (int k = 0; k < d; ++k) box.max[static_cast<std::size_t>(k)] = spacing * static_cast<double>(side);

  PointSet truth(d);
  for (std::size_t i = 0; i < n_true; ++i) {
    Vec v{};
    std::size_t rest = i;
    for (int k = 0; k < d; ++k) {
      v[static_cast<std::size_t>(k)] = spacing * (static_cast<double>(rest % side) + 0.5);
      rest /= side;
    }
    truth.push_back(v);
  }
  PointSet model = truth;
  const PointSet field = generate_model_outliers(box, p.omega, derive_seed(seed, {1}));
  for (std::size_t i = 0; i < field.size(); ++i) model.push_back(field[i]);

  PointSet clean(d);
  clean.reserve(n_in);
  for (std::size_t i = 0; i < n_in; ++i) clean.push_back(truth[i / per_true]);
  PointSet data = perturb_gaussian(clean, p.sigma, derive_seed(seed, {2}));

  Rng rng(derive_seed(seed, {3}));
  const double margin = 10.0 * s_w;
  for (std::size_t i = 0; i < n_out; ++i) {
    Vec v{};
    for (int k = 0; k < d; ++k) v[static_cast<std::size_t>(k)] = rng.uniform(margin, box.max[static_cast<std::size_t>(k)] - margin);
    data.push_back(v);
  }

  const NearestIndex index(std::move(model));
  Residuals out;
  out.inliers = n_in;
  out.outliers = n_out;
  out.distance.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) out.distance.push_back(index.nearest(data[i]).distance);
  std::sort(out.distance.begin(), out.distance.end());
  return out;
}

}  // namespace mc

#endif  // FICP_TESTS_MONTE_CARLO_HPP
