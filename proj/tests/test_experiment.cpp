#include <gtest/gtest.h>

#include <numbers>
#include <random>
#include <sstream>

#include "ficp/experiment.hpp"
#include "oracles.hpp"

using namespace ficp;

namespace {

json small_grid() {
  return json::parse(R"({
    "shapes": ["curve"], "points": 300, "outlier_types": ["occlusion"],
    "p_inlier": [0.75], "rotations_deg": [5], "algorithms": ["ficp"],
    "repetitions": 2, "seed": 9
  })");
}

}  // namespace

TEST(JsonIo, TransformRoundTrip) {
  std::mt19937_64 gen(4);
  for (int d : {2, 3}) {
    const Matrix r = oracle::random_rotation(gen, d);
    const Vec t{1.25, -3.5, 0.125};
    for (const Transform& tr : {Transform::rigid(r, t), Transform::rigid_scale(r, 1.7, t), Transform::affine(1.3 * r, t)}) {
      const Transform back = transform_from_json(json::parse(transform_to_json(tr).dump()));
      EXPECT_EQ(back.kind(), tr.kind());
      EXPECT_EQ(back.dim(), d);
      EXPECT_DOUBLE_EQ(back.scale(), tr.scale());
      for (int i = 0; i < d; ++i) {
        EXPECT_DOUBLE_EQ(back.translation_vector()[static_cast<std::size_t>(i)], tr.translation_vector()[static_cast<std::size_t>(i)]);
        for (int j = 0; j < d; ++j) EXPECT_DOUBLE_EQ(back.linear()(i, j), tr.linear()(i, j));
      }
    }
  }
}

TEST(JsonIo, TransformRejectsBadShape) {
  json j = transform_to_json(Transform::identity(2));
  j["linear"] = {1.0, 0.0, 0.0};
  EXPECT_THROW(transform_from_json(j), std::invalid_argument);
  j = transform_to_json(Transform::identity(2));
  j["kind"] = "projective";
  EXPECT_THROW(transform_from_json(j), std::invalid_argument);
}

TEST(JsonIo, ReportRoundTrip) {
  RegistrationReport r;
  r.algorithm = Algorithm::tricp;
  r.transform = Transform::rigid(Matrix::rotation2d(0.3), Vec{1.0, 2.0, 0.0});
  r.f = 0.75;
  r.frmsd = 0.1234567890123;
  r.rmsd = 0.0987;
  r.iterations = 17;
  r.trace = {{1.0, 1.0, 1.0}, {0.5, 0.8, 0.4}};
  r.converged_by = ConvergedBy::epsilon;
  r.golden_search = true;
  r.golden_evaluations = 11;
  r.total_inner_iterations = 17;
  const json j = report_to_json(r, 0.5, 42);
  EXPECT_EQ(j.at("seed").get<std::uint64_t>(), 42u);
  const RegistrationReport b = report_from_json(json::parse(j.dump()));
  EXPECT_EQ(b.algorithm, r.algorithm);
  EXPECT_DOUBLE_EQ(b.frmsd, r.frmsd);
  EXPECT_DOUBLE_EQ(b.f, r.f);
  EXPECT_EQ(b.iterations, 17);
  EXPECT_EQ(b.converged_by, ConvergedBy::epsilon);
  ASSERT_EQ(b.trace.size(), 2u);
  EXPECT_DOUBLE_EQ(b.trace[1].rmsd, 0.4);
  EXPECT_TRUE(b.golden_search);
  EXPECT_EQ(b.golden_evaluations, 11);
}

TEST(JsonIo, SynthesisSidecar) {
  SynthesisParams p;
  p.base = make_curve(200);
  p.outlier = OutlierType::new_data;
  p.p_inlier = 0.8;
  p.seed = 3;
  const SynthesisRecord rec = synthesize(p);
  const json j = synthesis_to_json(rec, {{"shape", "curve"}}, 3);
  EXPECT_EQ(j.at("inlier_flags").size(), rec.data.size());
  EXPECT_DOUBLE_EQ(j.at("effective_inlier_fraction").get<double>(), rec.effective_inlier_fraction);
  const Transform t = transform_from_json(j.at("true_transform"));
  EXPECT_DOUBLE_EQ(t.linear()(0, 1), rec.true_transform.linear()(0, 1));
}

TEST(ExperimentSpec, ParsesAxesAndOverrides) {
  json j = small_grid();
  j["algorithms"] = {"ficp", "tricp"};
  j["overrides"] = {{"tricp", {{"fixed_f", 0.6}, {"max_iterations", 40}}}, {"ficp", {{"lambda", 3.0}}}};
  const ExperimentSpec s = parse_experiment_spec(j);
  EXPECT_EQ(s.points, 300u);
  EXPECT_EQ(s.repetitions, 2);
  EXPECT_DOUBLE_EQ(s.config_for(Algorithm::ficp).frmsd.lambda, 3.0);
  EXPECT_EQ(s.config_for(Algorithm::tricp).max_iterations, 40);
  ASSERT_TRUE(s.config_for(Algorithm::tricp).fixed_f.has_value());
  EXPECT_DOUBLE_EQ(*s.config_for(Algorithm::tricp).fixed_f, 0.6);
}

TEST(ExperimentSpec, EmptyAxisIsRejected) {
  for (const char* axis : {"outlier_types", "p_inlier", "rotations_deg", "algorithms", "shapes"}) {
    json j = small_grid();
    j[axis] = json::array();
    EXPECT_THROW(parse_experiment_spec(j), std::invalid_argument) << axis;
  }
  json j = small_grid();
  j["p_inlier"] = {1.5};
  EXPECT_THROW(parse_experiment_spec(j), std::invalid_argument);
  j = small_grid();
  j["outlier_types"] = {"fog"};
  EXPECT_THROW(parse_experiment_spec(j), std::invalid_argument);
}

TEST(Experiment, SingleCellFindsInlierFraction) {
  const auto rows = run_experiment(parse_experiment_spec(small_grid()));
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].runs, 2);
  EXPECT_EQ(rows[0].status(), "ok");
  EXPECT_NEAR(rows[0].f, 0.75, 0.05);
  EXPECT_LT(rows[0].rot_err_deg, 0.5);
  EXPECT_LT(rows[0].f_err, 0.05);
}

TEST(Experiment, IcpPaysForOutliersInRmsd) {
  json j = small_grid();
  j["algorithms"] = {"ficp", "icp"};
  const auto rows = run_experiment(parse_experiment_spec(j));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].algorithm, Algorithm::ficp);
  EXPECT_EQ(rows[1].algorithm, Algorithm::icp);
  EXPECT_DOUBLE_EQ(rows[1].f, 1.0);
  EXPECT_GT(rows[1].rmsd, 3.0 * rows[0].rmsd);
}

TEST(Experiment, RowOrderFollowsSpec) {
  json j = small_grid();
  j["outlier_types"] = {"new-data", "occlusion"};
  j["p_inlier"] = {0.9, 0.7};
  j["algorithms"] = {"icp", "ficp"};
  j["repetitions"] = 1;
  j["points"] = 150;
  const auto rows = run_experiment(parse_experiment_spec(j));
  ASSERT_EQ(rows.size(), 8u);
  EXPECT_EQ(rows[0].outlier, OutlierType::new_data);
  EXPECT_DOUBLE_EQ(rows[0].p_inlier, 0.9);
  EXPECT_EQ(rows[0].algorithm, Algorithm::icp);
  EXPECT_EQ(rows[1].algorithm, Algorithm::ficp);
  EXPECT_DOUBLE_EQ(rows[2].p_inlier, 0.7);
  EXPECT_EQ(rows[4].outlier, OutlierType::occlusion);
}

TEST(Experiment, CsvFormat) {
  ResultRow r;
  r.algorithm = Algorithm::tricp;
  r.p_inlier = 0.75;
  r.rotation_deg = 5.0;
  r.outlier = OutlierType::deformation;
  r.f = 0.8;
  r.runs = 3;
  r.failures = 1;
  std::ostringstream out;
  write_result_csv(out, {r});
  std::istringstream in(out.str());
  std::string header, line;
  std::getline(in, header);
  std::getline(in, line);
  EXPECT_EQ(header, kBenchCsvHeader);
  EXPECT_EQ(line.rfind("tricp,0.75,5,deformation,", 0), 0u) << line;
  EXPECT_NE(line.find(",failed 1/4"), std::string::npos) << line;
  EXPECT_EQ(std::count(line.begin(), line.end(), ','), std::count(header.begin(), header.end(), ','));
}

TEST(Experiment, DeterministicAcrossRunsAndThreads) {
  json j = small_grid();
  j["outlier_types"] = {"occlusion", "new-data"};
  j["algorithms"] = {"ficp", "tricp"};
  j["overrides"] = {{"tricp", {{"fixed_f", 0.7}}}};
  j["points"] = 200;
  const ExperimentSpec s = parse_experiment_spec(j);
  const auto a = run_experiment(s, 1);
  const auto b = run_experiment(s, 1);
  const auto c = run_experiment(s, 2);
  ASSERT_EQ(a.size(), b.size());
  ASSERT_EQ(a.size(), c.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (const auto* other : {&b[i], &c[i]}) {
      EXPECT_EQ(a[i].algorithm, other->algorithm);
      EXPECT_EQ(a[i].iterations, other->iterations);
      EXPECT_EQ(a[i].rmsd, other->rmsd);
      EXPECT_EQ(a[i].frmsd, other->frmsd);
      EXPECT_EQ(a[i].f, other->f);
      EXPECT_EQ(a[i].rot_err_deg, other->rot_err_deg);
      EXPECT_EQ(a[i].f_err, other->f_err);
    }
}

TEST(Experiment, UnknownShapeFails) {
  EXPECT_THROW(make_shape("teapot", 10), std::invalid_argument);
  EXPECT_EQ(make_shape("curve", 120).size(), 120u);
}
