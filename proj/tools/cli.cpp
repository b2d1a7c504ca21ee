#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <optional>
#include <sstream>

#include "ficp/experiment.hpp"
#include "ficp/json_io.hpp"
#include "ficp/lambda_analysis.hpp"
#include "ficp/point_io.hpp"
#include "ficp/registration.hpp"
#include "ficp/synth.hpp"

namespace ficp::cli {
namespace {

struct RegisterOptions {
  std::string data, model, algorithm = "ficp", transform = "rigid", out;
  double lambda = kOptimizationLambda, min_fraction = 0.05, epsilon = 1e-8, golden_tolerance = 0.01;
  std::optional<double> fixed_f;
  int max_iters = 200;
  std::uint64_t seed = 0;
  bool reclassify = false;
  std::optional<double> reclassify_lambda;
  std::string stop_rule = "epsilon";
};

struct SynthOptions {
  std::string shape = "curve", outlier = "occlusion", out_prefix;
  std::size_t points = 500;
  double p_inlier = 1.0, sigma = 0.1, rotate_deg = 0.0, omega = 0.0;
  std::optional<double> shift_scale;
  std::uint64_t seed = 0;
};

struct BenchOptions {
  std::string spec, out;
  int jobs = 1;
};

struct LambdaOptions {
  std::vector<int> dims{2, 3};
  std::string alpha = "0.2";
  std::vector<double> p_inliers{0.7};
  std::string out;
};

int cmd_register(const RegisterOptions& o, std::ostream& out, std::ostream& err) {
  EngineConfig cfg;
  try {
    cfg.algorithm = parse_algorithm(o.algorithm);
    cfg.transform_class = parse_transform_kind(o.transform);
    cfg.frmsd = {o.lambda, o.min_fraction};
    cfg.epsilon = o.epsilon;
    cfg.max_iterations = o.max_iters;
    cfg.fixed_f = o.fixed_f;
    cfg.golden_tolerance = o.golden_tolerance;
    cfg.seed = o.seed;
    if (o.stop_rule == "epsilon") cfg.stop_rule = StopRule::epsilon;
    else if (o.stop_rule == "fixed-point") cfg.stop_rule = StopRule::fixed_point;
    else throw std::invalid_argument("unknown stop rule '" + o.stop_rule + "'");
    cfg.validate();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }

  PointSet data, model;
  try {
    data = read_points_file(o.data);
    model = read_points_file(o.model);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  if (data.dim() != model.dim()) {
    err << "error: data is " << data.dim() << "-dimensional but model is " << model.dim() << "-dimensional\n";
    return kExitError;
  }

  RegistrationReport rep;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    rep = run_registration(data, model, cfg);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  json j = report_to_json(rep, seconds, o.seed);
  if (cfg.algorithm == Algorithm::tricp) j["mode"] = rep.golden_search ? "golden-section" : "fixed-f";
  if (o.reclassify) {
    const double lam = o.reclassify_lambda.value_or(reclassification_lambda(data.dim()));
    const FractionChoice c = reclassify_fraction(data, model, rep.transform, lam, o.min_fraction);
    j["reclassified"] = {{"lambda", lam}, {"f", c.f}, {"frmsd", c.frmsd}};
  }
  if (!o.out.empty()) {
    std::ofstream f(o.out);
    if (!f) {
      err << "error: cannot write '" << o.out << "'\n";
      return kExitError;
    }
    f << j.dump(2) << '\n';
  }
  out << to_string(rep.algorithm) << ": frmsd=" << format_double(rep.frmsd) << " f=" << format_double(rep.f)
      << " iterations=" << rep.iterations << " converged_by=" << to_string(rep.converged_by)
      << (rep.golden_search ? " (golden-section search over f)" : "") << '\n';
  return rep.converged() ? kExitOk : kExitNotConverged;
}

int cmd_synth(const SynthOptions& o, std::ostream& out, std::ostream& err) {
  SynthesisRecord rec;
  json params;
  try {
    SynthesisParams p;
    p.base = make_shape(o.shape, o.points);
    p.outlier = parse_outlier_type(o.outlier);
    p.p_inlier = o.p_inlier;
    p.sigma = o.sigma;
    p.rotate_deg = o.rotate_deg;
    p.shift_scale = o.shift_scale;
    p.omega = o.omega;
    p.seed = o.seed;
    rec = synthesize(p);
    params = {{"shape", o.shape},       {"points", p.base.size()}, {"outlier", o.outlier},
              {"p_inlier", o.p_inlier}, {"sigma", o.sigma},        {"rotate_deg", o.rotate_deg},
              {"omega", o.omega}};
    if (o.shift_scale) params["shift_scale"] = *o.shift_scale;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  const std::string data_path = o.out_prefix + "_data.xyz";
  const std::string model_path = o.out_prefix + "_model.xyz";
  const std::string truth_path = o.out_prefix + "_truth.json";
  try {
    write_points_file(data_path, rec.data);
    write_points_file(model_path, rec.model);
    std::ofstream f(truth_path);
    if (!f) throw std::runtime_error("cannot write '" + truth_path + "'");
    f << synthesis_to_json(rec, params, o.seed).dump(2) << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  out << "wrote " << data_path << " (" << rec.data.size() << " points), " << model_path << " ("
      << rec.model.size() << " points), " << truth_path << '\n';
  return kExitOk;
}

int cmd_bench(const BenchOptions& o, std::ostream& out, std::ostream& err) {
  ExperimentSpec spec;
  try {
    std::ifstream in(o.spec);
    if (!in) throw std::runtime_error("cannot open '" + o.spec + "'");
    spec = parse_experiment_spec(json::parse(in));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  const auto rows = run_experiment(spec, o.jobs);
  if (o.out.empty()) {
    write_result_csv(out, rows);
  } else {
    std::ofstream f(o.out);
    if (!f) {
      err << "error: cannot write '" << o.out << "'\n";
      return kExitError;
    }
    write_result_csv(f, rows);
  }
  return kExitOk;
}

/// "a:b:n" (n evenly spaced values, endpoints included) or "x,y,z".
std::vector<double> parse_grid(const std::string& s) {
  std::vector<double> v;
  if (s.find(':') != std::string::npos) {
    std::istringstream in(s);
    std::string a, b, n;
    std::getline(in, a, ':');
    std::getline(in, b, ':');
    std::getline(in, n, ':');
    const double lo = std::stod(a), hi = std::stod(b);
    const int count = std::stoi(n);
    if (count < 1) throw std::invalid_argument("grid count must be positive");
    for (int i = 0; i < count; ++i) v.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
    return v;
  }
  std::istringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ','))
    if (!tok.empty()) v.push_back(std::stod(tok));
  return v;
}

int cmd_lambda(const LambdaOptions& o, std::ostream& out, std::ostream& err) {
  std::vector<double> alphas;
  try {
    alphas = parse_grid(o.alpha);
  } catch (const std::exception& e) {
    err << "error: bad --alpha grid '" << o.alpha << "': " << e.what() << '\n';
    return kExitError;
  }
  if (alphas.empty() || o.dims.empty() || o.p_inliers.empty()) {
    err << "error: empty grid\n";
    return kExitError;
  }
  for (double a : alphas)
    if (!(a > 0.0 && a < 1.0)) {
      err << "error: alpha " << a << " is outside (0, 1)\n";
      return kExitError;
    }
  std::ostringstream csv;
  csv << "d,alpha,p_inlier,rho,lambda\n";
  try {
    for (int d : o.dims)
      for (double p : o.p_inliers)
        for (double a : alphas)
          csv << d << ',' << format_double(a) << ',' << format_double(p) << ','
              << format_double(normalized_critical_distance(a)) << ',' << format_double(solve_lambda(a, p, d)) << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  if (o.out.empty()) {
    out << csv.str();
  } else {
    std::ofstream f(o.out);
    if (!f) {
      err << "error: cannot write '" << o.out << "'\n";
      return kExitError;
    }
    f << csv.str();
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robust point-set registration with fractional ICP"};
  app.require_subcommand(1);

  RegisterOptions reg;
  auto* c_reg = app.add_subcommand("register", "Register a data point file onto a model point file");
  c_reg->add_option("--data", reg.data, "Data point file")->required();
  c_reg->add_option("--model", reg.model, "Model point file")->required();
  c_reg->add_option("--algorithm", reg.algorithm, "icp | tricp | ficp")->capture_default_str();
  c_reg->add_option("--transform", reg.transform, "rigid | rigid-scale | affine")->capture_default_str();
  c_reg->add_option("--lambda", reg.lambda, "FRMSD exponent")->capture_default_str();
  c_reg->add_option("--min-fraction", reg.min_fraction, "Smallest admissible fraction")->capture_default_str();
  c_reg->add_option("--fixed-f", reg.fixed_f, "TrICP fraction (omit for golden-section search)");
  c_reg->add_option("--epsilon", reg.epsilon, "Relative FRMSD decrease stopping threshold")->capture_default_str();
  c_reg->add_option("--max-iters", reg.max_iters, "Iteration cap")->capture_default_str();
  c_reg->add_option("--golden-tolerance", reg.golden_tolerance, "Bracket width for the TrICP search")->capture_default_str();
  c_reg->add_option("--stop-rule", reg.stop_rule, "epsilon | fixed-point")->capture_default_str();
  c_reg->add_option("--seed", reg.seed, "Seed recorded in the report")->capture_default_str();
  c_reg->add_option("--out", reg.out, "Report JSON path");
  c_reg->add_flag("--reclassify", reg.reclassify, "Re-run the final fraction step at lambda 1.3 (2D) / 0.95 (3D)");
  c_reg->add_option("--reclassify-lambda", reg.reclassify_lambda, "Override the reclassification lambda");

  SynthOptions syn;
  auto* c_syn = app.add_subcommand("synth", "Generate a synthetic (data, model) pair with ground truth");
  c_syn->add_option("--shape", syn.shape, "curve | blob | file:<path>")->capture_default_str();
  c_syn->add_option("--points", syn.points, "Points in the built-in shapes")->capture_default_str();
  c_syn->add_option("--outlier", syn.outlier, "occlusion | deformation | new-data")->capture_default_str();
  c_syn->add_option("--p-inlier", syn.p_inlier, "Target data inlier fraction")->capture_default_str();
  c_syn->add_option("--sigma", syn.sigma, "Gaussian noise standard deviation")->capture_default_str();
  c_syn->add_option("--rotate-deg", syn.rotate_deg, "Initial rotation of the data")->capture_default_str();
  c_syn->add_option("--shift-scale", syn.shift_scale, "Deformation shift (default 5 sigma)");
  c_syn->add_option("--omega", syn.omega, "Model outlier density")->capture_default_str();
  c_syn->add_option("--seed", syn.seed, "Random seed")->capture_default_str();
  c_syn->add_option("--out-prefix", syn.out_prefix, "Output prefix")->required();

  BenchOptions ben;
  auto* c_ben = app.add_subcommand("bench", "Run an experiment grid described by a JSON spec");
  c_ben->add_option("spec", ben.spec, "Experiment spec JSON")->required();
  c_ben->add_option("--out", ben.out, "CSV output path (default stdout)");
  c_ben->add_option("--jobs", ben.jobs, "Concurrent instances")->capture_default_str();

  LambdaOptions lam;
  auto* c_lam = app.add_subcommand("lambda", "Tabulate the critical distance and the analytical lambda");
  c_lam->add_option("--d", lam.dims, "Dimensions")->delimiter(',')->capture_default_str();
  c_lam->add_option("--alpha", lam.alpha, "omega/omega_max grid: a:b:n or comma list")->capture_default_str();
  c_lam->add_option("--p-inlier", lam.p_inliers, "Inlier fractions")->delimiter(',')->capture_default_str();
  c_lam->add_option("--out", lam.out, "CSV output path (default stdout)");

  std::vector<std::string> argv_store{"ficp"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitError;
  }

  if (c_reg->parsed()) return cmd_register(reg, out, err);
  if (c_syn->parsed()) return cmd_synth(syn, out, err);
  if (c_ben->parsed()) return cmd_bench(ben, out, err);
  if (c_lam->parsed()) return cmd_lambda(lam, out, err);
  return kExitError;
}

}  // namespace ficp::cli
