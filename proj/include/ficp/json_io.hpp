#ifndef FICP_JSON_IO_HPP
#define FICP_JSON_IO_HPP

#include <json.hpp>

#include "ficp/geometry.hpp"
#include "ficp/registration.hpp"
#include "ficp/synth.hpp"

namespace ficp {

using json = nlohmann::json;

inline json transform_to_json(const Transform& t) {
  json linear = json::array();
  for (int i = 0; i < t.dim(); ++i)
    for (int j = 0; j < t.dim(); ++j) linear.push_back(t.linear()(i, j));
  json translation = json::array();
  for (int k = 0; k < t.dim(); ++k) translation.push_back(t.translation_vector()[static_cast<std::size_t>(k)]);
  return {{"kind", to_string(t.kind())}, {"linear", linear}, {"translation", translation}, {"scale", t.scale()}};
}

inline Transform transform_from_json(const json& j) {
  const TransformKind kind = parse_transform_kind(j.at("kind").get<std::string>());
  const auto& translation = j.at("translation");
  const int d = static_cast<int>(translation.size());
  require_supported_dim(d);
  const auto& linear = j.at("linear");
  if (static_cast<int>(linear.size()) != d * d) throw std::invalid_argument("transform JSON: linear has wrong size");
  Matrix m(d);
  for (int i = 0; i < d * d; ++i) m(i / d, i % d) = linear.at(static_cast<std::size_t>(i)).get<double>();
  Vec t{};
  for (int k = 0; k < d; ++k) t[static_cast<std::size_t>(k)] = translation.at(static_cast<std::size_t>(k)).get<double>();
  switch (kind) {
    case TransformKind::rigid: return Transform::rigid(m, t);
    case TransformKind::rigid_scale: return Transform::rigid_scale(m, j.at("scale").get<double>(), t);
    case TransformKind::affine: return Transform::affine(m, t);
  }
  throw std::invalid_argument("transform JSON: unknown kind");
}

inline json report_to_json(const RegistrationReport& r, double wall_seconds, std::uint64_t seed) {
  json trace = json::array();
  for (const TraceEntry& e : r.trace) trace.push_back({{"frmsd", e.frmsd}, {"f", e.f}, {"rmsd", e.rmsd}});
  json j = {{"algorithm", to_string(r.algorithm)},
            {"transform", transform_to_json(r.transform)},
            {"f", r.f},
            {"frmsd", r.frmsd},
            {"rmsd", r.rmsd},
            {"iterations", r.iterations},
            {"converged_by", to_string(r.converged_by)},
            {"trace", trace},
            {"wall_seconds", wall_seconds},
            {"seed", seed}};
  if (r.golden_search) {
    j["golden_search"] = true;
    j["golden_evaluations"] = r.golden_evaluations;
    j["total_inner_iterations"] = r.total_inner_iterations;
  }
  return j;
}

inline ConvergedBy parse_converged_by(const std::string& s) {
  if (s == "fixed_point") return ConvergedBy::fixed_point;
  if (s == "epsilon") return ConvergedBy::epsilon;
  if (s == "max_iterations") return ConvergedBy::max_iterations;
  throw std::invalid_argument("unknown convergence reason '" + s + "'");
}

inline RegistrationReport report_from_json(const json& j) {
  RegistrationReport r;
  r.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
  r.transform = transform_from_json(j.at("transform"));
  r.f = j.at("f").get<double>();
  r.frmsd = j.at("frmsd").get<double>();
  r.rmsd = j.at("rmsd").get<double>();
  r.iterations = j.at("iterations").get<int>();
  r.converged_by = parse_converged_by(j.at("converged_by").get<std::string>());
  for (const auto& e : j.at("trace"))
    r.trace.push_back({e.at("frmsd").get<double>(), e.at("f").get<double>(), e.at("rmsd").get<double>()});
  r.golden_search = j.value("golden_search", false);
  r.golden_evaluations = j.value("golden_evaluations", 0);
  r.total_inner_iterations = j.value("total_inner_iterations", static_cast<long>(r.iterations));
  return r;
}

/// Ground-truth sidecar of a synthesised instance.
inline json synthesis_to_json(const SynthesisRecord& rec, const json& params, std::uint64_t seed) {
  return {{"true_transform", transform_to_json(rec.true_transform)},
          {"inlier_flags", rec.inlier_flags},
          {"effective_inlier_fraction", rec.effective_inlier_fraction},
          {"params", params},
          {"seed", seed}};
}

}  // namespace ficp

#endif  // FICP_JSON_IO_HPP
