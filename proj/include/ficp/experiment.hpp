#ifndef FICP_EXPERIMENT_HPP
#define FICP_EXPERIMENT_HPP

#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "ficp/json_io.hpp"
#include "ficp/point_io.hpp"
#include "ficp/registration.hpp"
#include "ficp/synth.hpp"

// Experiment grids: synthesise (D, M) pairs over outlier types, inlier
// fractions and initial rotations, register each with several algorithms and
// average the outcome per grid cell.

namespace ficp {

/// "curve", "blob" or "file:<path>".
inline PointSet make_shape(const std::string& shape, std::size_t points) {
  if (shape == "curve") return make_curve(points);
  if (shape == "blob") return make_blob(points);
  if (shape.rfind("file:", 0) == 0) return read_points_file(shape.substr(5));
  throw std::invalid_argument("unknown shape '" + shape + "'");
}

struct ExperimentSpec {
  std::vector<std::string> shapes{"curve"};
  std::size_t points = 500;
  std::vector<OutlierType> outlier_types;
  std::vector<double> p_inliers;
  std::vector<double> rotations_deg;
  std::vector<Algorithm> algorithms;
  std::map<Algorithm, EngineConfig> configs;  // per-algorithm, defaults filled in
  int repetitions = 1;
  std::uint64_t seed = 0;
  double sigma = 0.1;
  std::optional<double> shift_scale;
  double omega = 0.0;

  void validate() const {
    if (shapes.empty() || outlier_types.empty() || p_inliers.empty() || rotations_deg.empty() || algorithms.empty())
      throw std::invalid_argument("experiment grid has an empty axis");
    if (repetitions < 1) throw std::invalid_argument("repetitions must be at least 1");
    for (double p : p_inliers) require_target_fraction(p);
  }

  EngineConfig config_for(Algorithm a) const {
    auto it = configs.find(a);
    EngineConfig cfg = it == configs.end() ? EngineConfig{} : it->second;
    cfg.algorithm = a;
    return cfg;
  }
};

/// Builds a spec from JSON. Keys: shapes, points, outlier_types, p_inlier,
/// rotations_deg, algorithms, overrides {algo: {lambda, min_fraction, epsilon,
/// max_iterations, fixed_f, golden_tolerance, transform}}, repetitions, seed,
/// sigma, shift_scale, omega.
inline ExperimentSpec parse_experiment_spec(const json& j) {
  ExperimentSpec s;
  if (j.contains("shapes")) s.shapes = j.at("shapes").get<std::vector<std::string>>();
  s.points = j.value("points", s.points);
  for (const auto& t : j.value("outlier_types", std::vector<std::string>{})) s.outlier_types.push_back(parse_outlier_type(t));
  s.p_inliers = j.value("p_inlier", std::vector<double>{});
  s.rotations_deg = j.value("rotations_deg", std::vector<double>{});
  for (const auto& a : j.value("algorithms", std::vector<std::string>{})) s.algorithms.push_back(parse_algorithm(a));
  s.repetitions = j.value("repetitions", 1);
  s.seed = j.value("seed", std::uint64_t{0});
  s.sigma = j.value("sigma", s.sigma);
  if (j.contains("shift_scale")) s.shift_scale = j.at("shift_scale").get<double>();
  s.omega = j.value("omega", 0.0);
  const std::string transform = j.value("transform", std::string("rigid"));
  for (Algorithm a : s.algorithms) {
    EngineConfig cfg;
    cfg.algorithm = a;
    cfg.transform_class = parse_transform_kind(transform);
    cfg.seed = s.seed;
    const std::string key = to_string(a);
    if (j.contains("overrides") && j.at("overrides").contains(key)) {
      const json& o = j.at("overrides").at(key);
      cfg.frmsd.lambda = o.value("lambda", cfg.frmsd.lambda);
      cfg.frmsd.min_fraction = o.value("min_fraction", cfg.frmsd.min_fraction);
      cfg.epsilon = o.value("epsilon", cfg.epsilon);
      cfg.max_iterations = o.value("max_iterations", cfg.max_iterations);
      cfg.golden_tolerance = o.value("golden_tolerance", cfg.golden_tolerance);
      if (o.contains("fixed_f")) cfg.fixed_f = o.at("fixed_f").get<double>();
      if (o.contains("transform")) cfg.transform_class = parse_transform_kind(o.at("transform").get<std::string>());
    }
    cfg.validate();
    s.configs[a] = cfg;
  }
  s.validate();
  return s;
}

struct InstanceKey {
  std::size_t shape = 0, outlier = 0, p_inlier = 0, rotation = 0;
  int repetition = 0;
};

/// Seed of one synthetic instance: hash of the master seed and its grid coordinates.
inline std::uint64_t instance_seed(std::uint64_t master, const InstanceKey& k) {
  return derive_seed(master, {k.shape, k.outlier, k.p_inlier, k.rotation, static_cast<std::uint64_t>(k.repetition)});
}

struct RunOutcome {
  bool ok = false;
  std::string error;
  RegistrationReport report;
  double seconds = 0.0;
  double rotation_error_deg = 0.0;
  double f_error = 0.0;  // |f - effective inlier fraction|
};

inline RunOutcome evaluate(const SynthesisRecord& rec, const EngineConfig& cfg) {
  RunOutcome out;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    out.report = run_registration(rec.data, rec.model, cfg);
    out.ok = true;
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (out.ok) {
    const Matrix est = out.report.transform.kind() == TransformKind::affine ? out.report.transform.effective_linear()
                                                                             : out.report.transform.linear();
    out.rotation_error_deg = rotation_error(est, rec.true_transform.linear()) * 180.0 / std::numbers::pi;
    out.f_error = std::abs(out.report.f - rec.effective_inlier_fraction);
  }
  return out;
}

struct ResultRow {
  Algorithm algorithm = Algorithm::ficp;
  double p_inlier = 0.0;
  double rotation_deg = 0.0;
  OutlierType outlier = OutlierType::occlusion;
  double time_s = 0.0;
  double iterations = 0.0;
  double rmsd = 0.0;
  double frmsd = 0.0;
  double f = 0.0;
  double rot_err_deg = 0.0;
  double f_err = 0.0;
  int runs = 0;
  int failures = 0;

  std::string status() const {
    if (failures == 0) return "ok";
    return "failed " + std::to_string(failures) + "/" + std::to_string(runs + failures);
  }
};

inline constexpr const char* kBenchCsvHeader =
    "algorithm,p_inlier,rotation_deg,outlier_type,time_s,iterations,rmsd,frmsd,f,rot_err_deg,f_err,status";

inline void write_result_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kBenchCsvHeader << '\n';
  for (const ResultRow& r : rows) {
    out << to_string(r.algorithm) << ',' << format_double(r.p_inlier) << ',' << format_double(r.rotation_deg) << ','
        << to_string(r.outlier) << ',' << format_double(r.time_s) << ',' << format_double(r.iterations) << ','
        << format_double(r.rmsd) << ',' << format_double(r.frmsd) << ',' << format_double(r.f) << ','
        << format_double(r.rot_err_deg) << ',' << format_double(r.f_err) << ',' << r.status() << '\n';
  }
}

/// Runs the whole grid. Instances are spread over `jobs` threads; the result
/// does not depend on the schedule. Rows are ordered by (outlier type,
/// p_inlier, rotation, algorithm) in spec order.
inline std::vector<ResultRow> run_experiment(const ExperimentSpec& spec, int jobs = 1) {
  spec.validate();
  std::vector<PointSet> bases;
  for (const auto& s : spec.shapes) bases.push_back(make_shape(s, spec.points));

  std::vector<InstanceKey> keys;
  for (std::size_t o = 0; o < spec.outlier_types.size(); ++o)
    for (std::size_t p = 0; p < spec.p_inliers.size(); ++p)
      for (std::size_t r = 0; r < spec.rotations_deg.size(); ++r)
        for (std::size_t s = 0; s < bases.size(); ++s)
          for (int rep = 0; rep < spec.repetitions; ++rep) keys.push_back({s, o, p, r, rep});

  const std::size_t n_alg = spec.algorithms.size();
  std::vector<RunOutcome> outcomes(keys.size() * n_alg);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < keys.size(); i = next++) {
      const InstanceKey& k = keys[i];
      SynthesisParams params;
      params.base = bases[k.shape];
      params.outlier = spec.outlier_types[k.outlier];
      params.p_inlier = spec.p_inliers[k.p_inlier];
      params.sigma = spec.sigma;
      params.rotate_deg = spec.rotations_deg[k.rotation];
      params.shift_scale = spec.shift_scale;
      params.omega = spec.omega;
      params.seed = instance_seed(spec.seed, k);
      try {
        const SynthesisRecord rec = synthesize(params);
        for (std::size_t a = 0; a < n_alg; ++a) outcomes[i * n_alg + a] = evaluate(rec, spec.config_for(spec.algorithms[a]));
      } catch (const std::exception& e) {
        for (std::size_t a = 0; a < n_alg; ++a) outcomes[i * n_alg + a].error = e.what();
      }
    }
  };
  const int threads = std::max(1, jobs);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  std::vector<ResultRow> rows;
  for (std::size_t o = 0; o < spec.outlier_types.size(); ++o)
    for (std::size_t p = 0; p < spec.p_inliers.size(); ++p)
      for (std::size_t r = 0; r < spec.rotations_deg.size(); ++r)
        for (std::size_t a = 0; a < n_alg; ++a) {
          ResultRow row;
          row.algorithm = spec.algorithms[a];
          row.p_inlier = spec.p_inliers[p];
          row.rotation_deg = spec.rotations_deg[r];
          row.outlier = spec.outlier_types[o];
          for (std::size_t i = 0; i < keys.size(); ++i) {
            const InstanceKey& k = keys[i];
            if (k.outlier != o || k.p_inlier != p || k.rotation != r) continue;
            const RunOutcome& out = outcomes[i * n_alg + a];
            if (!out.ok) {
              ++row.failures;
              continue;
            }
            ++row.runs;
            row.time_s += out.seconds;
            row.iterations += out.report.iterations;
            row.rmsd += out.report.rmsd;
            row.frmsd += out.report.frmsd;
            row.f += out.report.f;
            row.rot_err_deg += out.rotation_error_deg;
            row.f_err += out.f_error;
          }
          const double n = row.runs > 0 ? row.runs : std::numeric_limits<double>::quiet_NaN();
          for (double* v : {&row.time_s, &row.iterations, &row.rmsd, &row.frmsd, &row.f, &row.rot_err_deg, &row.f_err})
            *v /= n;
          rows.push_back(row);
        }
  return rows;
}

}  // namespace ficp

#endif  // FICP_EXPERIMENT_HPP
