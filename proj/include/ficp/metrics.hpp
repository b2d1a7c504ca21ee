#ifndef FICP_METRICS_HPP
#define FICP_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>

#include "ficp/correspondence.hpp"

namespace ficp {

struct FrmsdConfig {
  double lambda = 3.0;
  double min_fraction = 0.05;

  void validate() const {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be positive");
    if (!(min_fraction > 0.0) || min_fraction > 1.0) throw std::invalid_argument("min_fraction must lie in (0, 1]");
  }
};

/// Loop default and the post-convergence reclassification defaults.
inline constexpr double kOptimizationLambda = 3.0;
inline double reclassification_lambda(int dim) { return dim >= 3 ? 0.95 : 1.3; }

inline constexpr std::size_t kMinSubsetSize = 2;

inline double rmsd(const Matching& m, std::span<const std::size_t> subset) {
  if (subset.empty()) throw std::invalid_argument("rmsd over an empty subset");
  double sum = 0.0;
  for (std::size_t i : subset) sum += m.residual[i] * m.residual[i];
  return std::sqrt(sum / static_cast<double>(subset.size()));
}

inline double rmsd(const Matching& m) {
  if (m.size() == 0) throw std::invalid_argument("rmsd over an empty subset");
  double sum = 0.0;
  for (double r : m.residual) sum += r * r;
  return std::sqrt(sum / static_cast<double>(m.size()));
}

/// f^-lambda * rmsd(D_f). `f` is used as given, not snapped to |D_f| / |D|.
inline double frmsd(const Matching& m, double f, const FrmsdConfig& cfg) {
  const auto subset = select_subset(m, f);
  if (subset.size() < kMinSubsetSize) throw std::invalid_argument("fraction selects fewer than two points");
  return rmsd(m, subset) / std::pow(f, cfg.lambda);
}

struct FractionChoice {
  double f = 1.0;
  double frmsd = 0.0;
  std::size_t count = 0;  // |D_f|
};

/// Smallest admissible prefix length for the fraction scan.
inline std::size_t min_prefix(std::size_t n, const FrmsdConfig& cfg) {
  const auto by_fraction = static_cast<std::size_t>(std::ceil(cfg.min_fraction * static_cast<double>(n) - 1e-9));
  return std::min(n, std::max(kMinSubsetSize, by_fraction));
}

/// Scans every prefix i/|D| of the residual order with a running sum of
/// squares. Equal values resolve to the larger fraction.
inline FractionChoice optimal_fraction(const Matching& m, const FrmsdConfig& cfg) {
  const std::size_t n = m.size();
  if (n < kMinSubsetSize) throw std::invalid_argument("optimal fraction needs at least two points");
  const std::size_t lo = min_prefix(n, cfg);
  const double dn = static_cast<double>(n);

  double sum = 0.0;
  FractionChoice best;
  best.frmsd = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i <= n; ++i) {
    const double r = m.residual[m.sorted_order[i - 1]];
    sum += r * r;
    if (i < lo) continue;
    const double f = static_cast<double>(i) / dn;
    const double value = std::sqrt(sum / static_cast<double>(i)) / std::pow(f, cfg.lambda);
    if (value <= best.frmsd) {
      best = {f, value, i};
    }
  }
  return best;
}

}  // namespace ficp

#endif  // FICP_METRICS_HPP
