#ifndef FICP_REGISTRATION_HPP
#define FICP_REGISTRATION_HPP

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ficp/alignment.hpp"
#include "ficp/correspondence.hpp"
#include "ficp/geometry.hpp"
#include "ficp/golden_section.hpp"
#include "ficp/kdtree.hpp"
#include "ficp/metrics.hpp"

namespace ficp {

enum class Algorithm { icp, tricp, ficp };

inline const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::icp: return "icp";
    case Algorithm::tricp: return "tricp";
    case Algorithm::ficp: return "ficp";
  }
  return "?";
}

inline Algorithm parse_algorithm(const std::string& s) {
  if (s == "icp") return Algorithm::icp;
  if (s == "tricp") return Algorithm::tricp;
  if (s == "ficp") return Algorithm::ficp;
  throw std::invalid_argument("unknown algorithm '" + s + "'");
}

/// epsilon: stop on a fixed point or when FRMSD drops by a relative amount
/// below epsilon. fixed_point: stop only when matching, fraction and trimmed
/// subset all repeat.
enum class StopRule { epsilon, fixed_point };

enum class ConvergedBy { fixed_point, epsilon, max_iterations };

inline const char* to_string(ConvergedBy c) {
  switch (c) {
    case ConvergedBy::fixed_point: return "fixed_point";
    case ConvergedBy::epsilon: return "epsilon";
    case ConvergedBy::max_iterations: return "max_iterations";
  }
  return "?";
}

struct EngineConfig {
  Algorithm algorithm = Algorithm::ficp;
  TransformKind transform_class = TransformKind::rigid;
  FrmsdConfig frmsd{};
  double epsilon = 1e-8;
  int max_iterations = 200;
  std::optional<double> fixed_f;  // TrICP; absent means golden-section search
  double golden_tolerance = 0.01;
  std::uint64_t seed = 0;
  StopRule stop_rule = StopRule::epsilon;

  void validate() const {
    frmsd.validate();
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (max_iterations < 1) throw std::invalid_argument("max_iterations must be at least 1");
    if (!(golden_tolerance > 0.0)) throw std::invalid_argument("golden_tolerance must be positive");
    if (fixed_f && (!(*fixed_f > 0.0) || *fixed_f > 1.0)) throw std::invalid_argument("fixed_f must lie in (0, 1]");
  }
};

struct TraceEntry {
  double frmsd = 0.0;
  double f = 1.0;
  double rmsd = 0.0;
};

struct RegistrationReport {
  Algorithm algorithm = Algorithm::ficp;
  Transform transform;
  double f = 1.0;
  double frmsd = 0.0;
  double rmsd = 0.0;  // over D_f
  int iterations = 0;
  std::vector<TraceEntry> trace;  // trace[0] is the initial pose
  ConvergedBy converged_by = ConvergedBy::max_iterations;

  // Golden-section TrICP only: number of TrICP runs and the iterations they
  // consumed in total (which is also what `iterations` reports in that mode).
  bool golden_search = false;
  int golden_evaluations = 0;
  long total_inner_iterations = 0;

  bool converged() const { return converged_by != ConvergedBy::max_iterations; }
};

namespace detail {

inline PairedSample paired_subset(const PointSet& data, const PointSet& model, const Matching& m,
                                  const std::vector<std::size_t>& subset) {
  PointSet src(data.dim()), tgt(data.dim());
  src.reserve(subset.size());
  tgt.reserve(subset.size());
  for (std::size_t i : subset) {
    src.push_back(data[i]);
    tgt.push_back(model[m.model_index[i]]);
  }
  return {std::move(src), std::move(tgt)};
}

struct FractionStep {
  double f;
  double frmsd;
};

inline FractionStep choose_fraction(const Matching& m, const EngineConfig& cfg, std::optional<double> fixed) {
  if (fixed) return {*fixed, frmsd(m, *fixed, cfg.frmsd)};
  const FractionChoice c = optimal_fraction(m, cfg.frmsd);
  return {c.f, c.frmsd};
}

/// Shared TrICP / FICP loop. With `fixed` set the fraction never moves.
inline RegistrationReport iterate(const PointSet& data, const NearestIndex& index, const EngineConfig& cfg,
                                  std::optional<double> fixed) {
  if (data.empty()) throw std::invalid_argument("empty data set");
  require_dim(index.dim(), data.dim());
  const PointSet& model = index.source();

  RegistrationReport rep;
  rep.algorithm = cfg.algorithm;
  rep.transform = Transform::identity(data.dim(), cfg.transform_class);

  PointSet current = data;
  Matching match = match_all(current, index);
  FractionStep frac = choose_fraction(match, cfg, fixed);
  std::vector<std::size_t> subset = select_subset(match, frac.f);
  rep.trace.push_back({frac.frmsd, frac.f, rmsd(match, subset)});

  rep.converged_by = ConvergedBy::max_iterations;
  for (int it = 1; it <= cfg.max_iterations; ++it) {
    const Transform step = solve_transform(paired_subset(current, model, match, subset), cfg.transform_class);
    current = apply_transform(step, current);
    rep.transform = compose(step, rep.transform);

    Matching next = match_all(current, index);
    const FractionStep next_frac = choose_fraction(next, cfg, fixed);
    std::vector<std::size_t> next_subset = select_subset(next, next_frac.f);
    rep.trace.push_back({next_frac.frmsd, next_frac.f, rmsd(next, next_subset)});
    rep.iterations = it;

    const bool fixed_point =
        next.model_index == match.model_index && next_frac.f == frac.f && next_subset == subset;
    const double prev = frac.frmsd;
    match = std::move(next);
    subset = std::move(next_subset);
    frac = next_frac;

    if (fixed_point) {
      rep.converged_by = ConvergedBy::fixed_point;
      break;
    }
    if (cfg.stop_rule == StopRule::epsilon && (prev <= 0.0 || (prev - frac.frmsd) / prev < cfg.epsilon)) {
      rep.converged_by = ConvergedBy::epsilon;
      break;
    }
  }

  rep.f = frac.f;
  rep.frmsd = frac.frmsd;
  rep.rmsd = rep.trace.back().rmsd;
  rep.total_inner_iterations = rep.iterations;
  return rep;
}

inline void check_inputs(const PointSet& data, const PointSet& model) {
  if (data.empty() || model.empty()) throw std::invalid_argument("registration needs non-empty point sets");
  require_dim(model.dim(), data.dim());
}

}  // namespace detail

/// TrICP at a fixed fraction against a prebuilt index.
inline RegistrationReport run_tricp_fixed(const PointSet& data, const NearestIndex& index, EngineConfig cfg, double f) {
  cfg.validate();
  if (f <= 0.0 || f > 1.0 || fraction_count(f, data.size()) < kMinSubsetSize)
    throw std::invalid_argument("fixed fraction selects fewer than two points");
  return detail::iterate(data, index, cfg, f);
}

/// Plain ICP: the trimmed loop with f pinned to 1.
inline RegistrationReport run_icp(const PointSet& data, const PointSet& model, EngineConfig cfg) {
  detail::check_inputs(data, model);
  cfg.algorithm = Algorithm::icp;
  return run_tricp_fixed(data, NearestIndex(model), cfg, 1.0);
}

/// Golden-section search over f in [min_fraction, 1] on f -> FRMSD(TrICP(f)).
/// Every probe restarts from the original pose. This is a heuristic: FRMSD of
/// the TrICP result is not unimodal in f in general.
inline RegistrationReport run_tricp_golden(const PointSet& data, const PointSet& model, EngineConfig cfg) {
  detail::check_inputs(data, model);
  cfg.validate();
  cfg.algorithm = Algorithm::tricp;
  const NearestIndex index(model);
  const double lo = std::max(cfg.frmsd.min_fraction,
                             static_cast<double>(kMinSubsetSize) / static_cast<double>(data.size()));

  std::optional<RegistrationReport> best;
  long total = 0;
  const auto objective = [&](double f) {
    RegistrationReport r = detail::iterate(data, index, cfg, f);
    total += r.iterations;
    const double value = r.frmsd;
    // equal FRMSD prefers the larger fraction, as in the fraction scan
    if (!best || value < best->frmsd || (value == best->frmsd && f > best->f)) best = std::move(r);
    return value;
  };
  const GoldenResult g = golden_section_minimize(objective, lo, 1.0, cfg.golden_tolerance);

  RegistrationReport rep = std::move(*best);
  rep.golden_search = true;
  rep.golden_evaluations = g.evaluations;
  rep.total_inner_iterations = total;
  rep.iterations = static_cast<int>(total);
  return rep;
}

/// Trimmed ICP. Uses `cfg.fixed_f` when set, otherwise the golden-section search.
inline RegistrationReport run_tricp(const PointSet& data, const PointSet& model, EngineConfig cfg) {
  detail::check_inputs(data, model);
  cfg.algorithm = Algorithm::tricp;
  if (!cfg.fixed_f) return run_tricp_golden(data, model, cfg);
  return run_tricp_fixed(data, NearestIndex(model), cfg, *cfg.fixed_f);
}

/// Fractional ICP: alternate trimmed alignment, re-matching and re-optimising
/// the fraction against FRMSD until nothing changes.
inline RegistrationReport run_ficp(const PointSet& data, const PointSet& model, EngineConfig cfg) {
  detail::check_inputs(data, model);
  cfg.validate();
  cfg.algorithm = Algorithm::ficp;
  if (data.size() < kMinSubsetSize) throw std::invalid_argument("FICP needs at least two data points");
  return detail::iterate(data, NearestIndex(model), cfg, std::nullopt);
}

inline RegistrationReport run_registration(const PointSet& data, const PointSet& model, const EngineConfig& cfg) {
  switch (cfg.algorithm) {
    case Algorithm::icp: return run_icp(data, model, cfg);
    case Algorithm::tricp: return run_tricp(data, model, cfg);
    case Algorithm::ficp: return run_ficp(data, model, cfg);
  }
  throw std::invalid_argument("unknown algorithm");
}

/// Re-runs only the fraction step at the converged pose with another lambda.
inline FractionChoice reclassify_fraction(const PointSet& data, const PointSet& model, const Transform& pose,
                                          double lambda, double min_fraction = 0.05) {
  detail::check_inputs(data, model);
  const NearestIndex index(model);
  const Matching m = match_all(apply_transform(pose, data), index);
  FrmsdConfig cfg{lambda, min_fraction};
  cfg.validate();
  return optimal_fraction(m, cfg);
}

}  // namespace ficp

#endif  // FICP_REGISTRATION_HPP
