#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "ficp/registration.hpp"
#include "ficp/synth.hpp"
#include "oracles.hpp"

using namespace ficp;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

SynthesisRecord instance(OutlierType type, double p, double rotate_deg, std::uint64_t seed, std::size_t n = 300) {
  SynthesisParams sp;
  sp.base = make_curve(n);
  sp.outlier = type;
  sp.p_inlier = p;
  sp.sigma = 0.1;
  sp.rotate_deg = rotate_deg;
  sp.seed = seed;
  return synthesize(sp);
}

EngineConfig config(Algorithm a) {
  EngineConfig c;
  c.algorithm = a;
  return c;
}

double rotation_error_deg(const RegistrationReport& r, const SynthesisRecord& rec) {
  return rotation_error(r.transform.linear(), rec.true_transform.linear()) / kDeg;
}

}  // namespace

TEST(Icp, AlreadyAlignedConvergesImmediately) {
  const PointSet m = make_curve(200);
  const RegistrationReport r = run_icp(m, m, config(Algorithm::icp));
  EXPECT_LE(r.iterations, 2);
  EXPECT_LT(r.rmsd, 1e-12);
  EXPECT_EQ(r.f, 1.0);
  EXPECT_TRUE(r.converged());
  EXPECT_LT(rotation_angle(r.transform.linear()), 1e-12);
}

TEST(Icp, RecoversFiveDegreesWithoutNoiseOrOutliers) {
  const SynthesisRecord rec = instance(OutlierType::occlusion, 1.0, 5.0, 1);
  SynthesisParams sp;
  sp.base = make_curve(300);
  sp.rotate_deg = 5.0;
  sp.seed = 2;
  const SynthesisRecord clean = synthesize(sp);
  const RegistrationReport r = run_icp(clean.data, clean.model, config(Algorithm::icp));
  EXPECT_LT(rotation_error(r.transform.linear(), clean.true_transform.linear()), 1e-6);
  EXPECT_LT(r.rmsd, 1e-9);
}

TEST(Icp, NewDataOutliersHurtIcpMoreThanFicp) {
  const SynthesisRecord rec = instance(OutlierType::new_data, 0.75, 5.0, 3);
  const RegistrationReport icp = run_icp(rec.data, rec.model, config(Algorithm::icp));
  const RegistrationReport ficp = run_ficp(rec.data, rec.model, config(Algorithm::ficp));
  EXPECT_GT(icp.rmsd, 5.0 * ficp.rmsd);
}

TEST(Tricp, FullFractionReproducesIcpTrace) {
  const SynthesisRecord rec = instance(OutlierType::new_data, 0.88, 5.0, 4);
  EngineConfig c = config(Algorithm::tricp);
  c.fixed_f = 1.0;
  const RegistrationReport t = run_tricp(rec.data, rec.model, c);
  const RegistrationReport i = run_icp(rec.data, rec.model, config(Algorithm::icp));
  ASSERT_EQ(t.trace.size(), i.trace.size());
  for (std::size_t k = 0; k < t.trace.size(); ++k) {
    EXPECT_EQ(t.trace[k].frmsd, i.trace[k].frmsd);
    EXPECT_EQ(t.trace[k].rmsd, i.trace[k].rmsd);
  }
  EXPECT_EQ(t.iterations, i.iterations);
}

TEST(Tricp, FixedFractionOnOcclusionRecoversRotation) {
  const SynthesisRecord rec = instance(OutlierType::occlusion, 0.75, 5.0, 5);
  EngineConfig c = config(Algorithm::tricp);
  c.fixed_f = 0.75;
  const RegistrationReport r = run_tricp(rec.data, rec.model, c);
  EXPECT_FALSE(r.golden_search);
  EXPECT_EQ(r.f, 0.75);
  EXPECT_LT(rotation_error_deg(r, rec), 0.5);
}

TEST(Tricp, TrimmedRmsdTraceIsMonotone) {
  for (std::uint64_t seed = 10; seed < 20; ++seed) {
    const SynthesisRecord rec = instance(static_cast<OutlierType>(seed % 3), 0.8, 10.0, seed);
    EngineConfig c = config(Algorithm::tricp);
    c.fixed_f = 0.7;
    const RegistrationReport r = run_tricp(rec.data, rec.model, c);
    for (std::size_t k = 1; k < r.trace.size(); ++k) EXPECT_LE(r.trace[k].rmsd, r.trace[k - 1].rmsd + 1e-12);
  }
}

TEST(TricpGolden, OutlierFreeAlignedInputPicksNearFullFraction) {
  // Noise-free copies make every fraction an exact tie up to rounding, so use
  // realistic noise; pure Gaussian residuals still favour trimming a thin tail.
  const SynthesisRecord rec = instance(OutlierType::occlusion, 1.0, 0.0, 16);
  const RegistrationReport r = run_tricp(rec.data, rec.model, config(Algorithm::tricp));
  EXPECT_TRUE(r.golden_search);
  EXPECT_GT(r.f, 0.9);
}

TEST(TricpGolden, OcclusionFractionWithinBand) {
  const SynthesisRecord rec = instance(OutlierType::occlusion, 0.75, 5.0, 6);
  const RegistrationReport r = run_tricp(rec.data, rec.model, config(Algorithm::tricp));
  EXPECT_NEAR(r.f, 0.75, 0.08);
}

TEST(TricpGolden, EvaluationCountMatchesGoldenArithmetic) {
  const SynthesisRecord rec = instance(OutlierType::occlusion, 0.88, 5.0, 7);
  EngineConfig c = config(Algorithm::tricp);
  const RegistrationReport r = run_tricp(rec.data, rec.model, c);
  const double width = 1.0 - c.frmsd.min_fraction;
  EXPECT_EQ(r.golden_evaluations, golden_section_evaluations(width, c.golden_tolerance));
  EXPECT_EQ(r.iterations, r.total_inner_iterations);
  EXPECT_GT(r.total_inner_iterations, r.golden_evaluations);
}

TEST(Ficp, AlreadyAlignedKeepsEverything) {
  const PointSet m = make_curve(250);
  const RegistrationReport r = run_ficp(m, m, config(Algorithm::ficp));
  EXPECT_EQ(r.f, 1.0);
  EXPECT_LE(r.iterations, 2);
  EXPECT_LT(rotation_angle(r.transform.linear()), 1e-12);
}

TEST(Ficp, DeformationFractionAndMonotoneFrmsd) {
  const SynthesisRecord rec = instance(OutlierType::deformation, 0.75, 5.0, 8, 500);
  const RegistrationReport r = run_ficp(rec.data, rec.model, config(Algorithm::ficp));
  // moved points that land near the curve legitimately count as inliers
  EXPECT_GE(r.f, rec.effective_inlier_fraction - 0.08);
  EXPECT_LE(r.frmsd, r.trace.front().frmsd);
}

TEST(Ficp, FewerInnerIterationsThanGoldenTricp) {
  const SynthesisRecord rec = instance(OutlierType::occlusion, 0.75, 5.0, 9);
  const RegistrationReport f = run_ficp(rec.data, rec.model, config(Algorithm::ficp));
  const RegistrationReport t = run_tricp(rec.data, rec.model, config(Algorithm::tricp));
  EXPECT_LT(f.total_inner_iterations, t.total_inner_iterations);
  EXPECT_LT(f.iterations, 50);
}

TEST(Ficp, TraceIsMonotoneAcrossTypesAndTransformClasses) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const SynthesisRecord rec = instance(static_cast<OutlierType>(seed % 3), 0.75 + 0.05 * (seed % 4), 5.0 + seed, 100 + seed);
    EngineConfig c = config(Algorithm::ficp);
    c.transform_class = static_cast<TransformKind>(seed % 3);
    c.max_iterations = 500;
    const RegistrationReport r = run_ficp(rec.data, rec.model, c);
    for (std::size_t k = 1; k < r.trace.size(); ++k) ASSERT_LE(r.trace[k].frmsd, r.trace[k - 1].frmsd + 1e-9) << "seed " << seed;
    EXPECT_TRUE(r.converged()) << "seed " << seed;
    EXPECT_EQ(r.frmsd, r.trace.back().frmsd);
    EXPECT_EQ(r.trace.size(), static_cast<std::size_t>(r.iterations) + 1);
  }
}

TEST(Ficp, FixedPointStopRuleTerminates) {
  const SynthesisRecord rec = instance(OutlierType::new_data, 0.88, 5.0, 11);
  EngineConfig c = config(Algorithm::ficp);
  c.stop_rule = StopRule::fixed_point;
  c.max_iterations = 500;
  const RegistrationReport r = run_ficp(rec.data, rec.model, c);
  EXPECT_EQ(r.converged_by, ConvergedBy::fixed_point);
}

TEST(Ficp, MaxIterationsIsReported) {
  const SynthesisRecord rec = instance(OutlierType::occlusion, 0.75, 25.0, 12);
  EngineConfig c = config(Algorithm::ficp);
  c.max_iterations = 1;
  c.stop_rule = StopRule::fixed_point;
  const RegistrationReport r = run_ficp(rec.data, rec.model, c);
  EXPECT_EQ(r.converged_by, ConvergedBy::max_iterations);
  EXPECT_FALSE(r.converged());
  EXPECT_EQ(r.iterations, 1);
}

TEST(Ficp, ThreeDimensionalBlob) {
  SynthesisParams sp;
  sp.base = make_blob(600);
  sp.outlier = OutlierType::new_data;
  sp.p_inlier = 0.8;
  sp.sigma = 0.05;
  sp.rotate_deg = 5.0;
  sp.seed = 13;
  const SynthesisRecord rec = synthesize(sp);
  const RegistrationReport r = run_ficp(rec.data, rec.model, config(Algorithm::ficp));
  EXPECT_NEAR(r.f, rec.effective_inlier_fraction, 0.05);
  EXPECT_LT(rotation_error_deg(r, rec), 0.5);
}

TEST(Engine, RejectsBadInputs) {
  const PointSet a(2, {{0, 0}, {1, 0}, {0, 1}});
  const PointSet b(3, {{0, 0, 0}});
  EXPECT_THROW(run_ficp(a, b, config(Algorithm::ficp)), DimensionMismatch);
  EXPECT_THROW(run_ficp(PointSet(2), a, config(Algorithm::ficp)), std::invalid_argument);
  EngineConfig c = config(Algorithm::tricp);
  c.fixed_f = 0.1;  // selects 0 of 3 points
  EXPECT_THROW(run_tricp(a, a, c), std::invalid_argument);
  EngineConfig bad = config(Algorithm::ficp);
  bad.max_iterations = 0;
  EXPECT_THROW(run_ficp(a, a, bad), std::invalid_argument);
}

TEST(Engine, DeterministicForSameInput) {
  const SynthesisRecord rec = instance(OutlierType::new_data, 0.75, 10.0, 14);
  const RegistrationReport a = run_ficp(rec.data, rec.model, config(Algorithm::ficp));
  const RegistrationReport b = run_ficp(rec.data, rec.model, config(Algorithm::ficp));
  EXPECT_EQ(a.frmsd, b.frmsd);
  EXPECT_EQ(a.iterations, b.iterations);
  EXPECT_EQ(a.transform.linear(), b.transform.linear());
}

TEST(Engine, ParsesAlgorithmNames) {
  for (Algorithm a : {Algorithm::icp, Algorithm::tricp, Algorithm::ficp}) EXPECT_EQ(parse_algorithm(to_string(a)), a);
  EXPECT_THROW(parse_algorithm("gicp"), std::invalid_argument);
}

TEST(Reclassify, LowerLambdaNeverKeepsMorePoints) {
  const SynthesisRecord rec = instance(OutlierType::new_data, 0.75, 5.0, 15);
  const RegistrationReport r = run_ficp(rec.data, rec.model, config(Algorithm::ficp));
  const FractionChoice c = reclassify_fraction(rec.data, rec.model, r.transform, reclassification_lambda(2));
  EXPECT_LE(c.f, r.f);
  EXPECT_NEAR(c.f, rec.effective_inlier_fraction, 0.05);
}
