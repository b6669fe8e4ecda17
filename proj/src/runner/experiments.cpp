#include "runner/experiments.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "calculus/contour.h"
#include "calculus/fractional.h"
#include "calculus/sector_function.h"
#include "common/csv.h"
#include "common/errors.h"
#include "common/quadrature.h"
#include "common/rng.h"
#include "evolution/heat.h"
#include "geometry/pullback.h"
#include "operators/estimates.h"
#include "runner/catalogs.h"

namespace flatcal {

const char* version_string() { return "0.1.0"; }

std::vector<std::string> experiment_names() {
  return {"geometry-check", "hardy",   "resolvent-scan", "calculus-bound",
          "bip-sweep",      "riesz",   "heat-mr",        "perturbation-curve"};
}

namespace {

struct RunContext {
  const Config& cfg;
  std::string out_dir;
  int threads;
  uint64_t seed;

  std::string path(const std::string& file) const { return out_dir + "/" + file; }
};

DiscreteOperator pullback_operator(const RunContext& ctx, const HalfSpaceGrid& g,
                                   const PullbackMap& map, double mu) {
  return assemble_pullback_laplacian(g, map, bc_from_config(ctx.cfg), mu, ctx.threads);
}

void run_geometry_check(const RunContext& ctx) {
  auto graph = boundary_from_config(ctx.cfg);
  PullbackConfig pc = pullback_from_config(ctx.cfg);
  PullbackMap map(graph, pc);

  CsvWriter out;
  out.header = {"check", "value", "threshold", "pass"};
  auto row = [&](const std::string& name, double value, double threshold, bool pass) {
    out.add_row({name, CsvWriter::num(value), CsvWriter::num(threshold), pass ? "1" : "0"});
  };

  MollifierSpec moll = MollifierSpec::make(graph->lat_dim(), pc.quad_order);
  const GaussRule& rule = gauss_rule(pc.quad_order);
  auto axis_mass = [&](const ScaledBump& b) {
    double m = 0.0;
    for (size_t i = 0; i < rule.x.size(); ++i)
      m += rule.w[i] * b.halfwidth * b.eval(rule.x[i] * b.halfwidth);
    return m;
  };
  double mass_err =
      std::max(std::abs(axis_mass(moll.eta) - 1.0), std::abs(axis_mass(moll.lat_axis) - 1.0));
  row("mollifier_unit_mass_error", mass_err, 1e-10, mass_err <= 1e-10);

  int nsamples = ctx.cfg.get_int("geometry.samples", 200);
  double R = graph->support_radius();
  QuasiSequence qs(graph->dim());
  std::vector<double> u(graph->dim()), x(graph->dim());
  double max_contr = 0.0, max_resid = 0.0;
  for (int i = 0; i < nsamples; ++i) {
    qs.point(i + 1, u.data());
    for (int j = 1; j < graph->dim(); ++j) x[j] = (2.0 * u[j] - 1.0) * 1.5 * R;
    x[0] = graph->eval(x.data() + 1) + 1e-3 + 3.0 * R * u[0];
    FixedPointStats stats;
    map.rho(x.data(), &stats);
    max_contr = std::max(max_contr, stats.contraction);
    max_resid = std::max(max_resid, stats.residual);
  }
  row("fixed_point_contraction", max_contr, 0.6, max_contr <= 0.6);
  row("fixed_point_residual", max_resid, pc.fp_tol, max_resid <= pc.fp_tol);

  if (graph->lat_dim() == 1) {
    int dsamples = ctx.cfg.get_int("geometry.distance_samples", 500);
    auto rep = map.verify_distance_equivalence(dsamples, ctx.seed);
    row("distance_ratio_min", rep.ratio_min, 0.2, rep.ratio_min >= 0.2);
    row("distance_ratio_max", rep.ratio_max, 5.0, rep.ratio_max <= 5.0);
    row("distance_refine_shift", rep.max_refine_shift, 0.05, rep.max_refine_shift <= 0.05);
  }

  std::vector<int> alpha(graph->dim(), 0);
  alpha[0] = 2;
  auto blow = map.verify_blowup_bounds(alpha, 8, true);
  double bound = graph->holder() - 1.0 - 0.2;
  bool pass = blow.flat || blow.slope >= bound;
  row("second_derivative_slope", blow.flat ? 0.0 : blow.slope, bound, pass);

  out.write(ctx.path("geometry_check.csv"));
}

void run_hardy(const RunContext& ctx) {
  HalfSpaceGrid g = HalfSpaceGrid::make(1, ctx.cfg.get_num("grid.x_max", 40.0),
                                        ctx.cfg.get_int("grid.n_normal", 64),
                                        ctx.cfg.get_num("grid.grading", 0.85));
  GridFunction u = GridFunction::sample(
      g, [](double x, double) { return std::complex<double>(x * std::exp(-x)); });

  CsvWriter out;
  out.header = {"p", "gamma", "case", "lhs", "rhs", "ratio"};
  for (double p : ctx.cfg.get_list("hardy.p_list", "1.5,2,3"))
    for (double gamma : ctx.cfg.get_list("hardy.gamma_list", "0.5,2.5")) {
      if (std::abs(gamma - (p - 1.0)) < 1e-9) continue;
      HardyResult h = hardy_check(u, p, gamma);
      out.add_row({CsvWriter::num(p), CsvWriter::num(gamma), std::to_string(h.case_id),
                   CsvWriter::num(h.lhs), CsvWriter::num(h.rhs), CsvWriter::num(h.ratio)});
    }
  out.write(ctx.path("hardy.csv"));
}

void run_resolvent_scan(const RunContext& ctx) {
  auto graph = boundary_from_config(ctx.cfg);
  PullbackMap map(graph, pullback_from_config(ctx.cfg));
  HalfSpaceGrid g = grid_from_config(ctx.cfg);
  DiscreteOperator A = pullback_operator(ctx, g, map, ctx.cfg.get_num("operator.mu", 1.0));
  NormSpec spec = normspec_from_config(ctx.cfg);

  std::vector<double> thetas =
      ctx.cfg.get_list("scan.thetas", "1.5707963267948966,2.356194490192345,3.041592653589793");
  double r0 = ctx.cfg.get_num("scan.r_min", 1e-3);
  double r1 = ctx.cfg.get_num("scan.r_max", 1e3);
  int count = ctx.cfg.get_int("scan.count", 13);
  if (!(r0 > 0.0 && r1 > r0)) throw validation_error("config: scan radii must satisfy 0 < min < max");
  if (count < 2) throw validation_error("config: scan.count must be at least 2");
  std::vector<double> radii(count);
  for (int i = 0; i < count; ++i)
    radii[i] = r0 * std::pow(r1 / r0, double(i) / (count - 1));

  CsvWriter out;
  out.header = {"theta", "r", "norm_estimate", "iterations", "flag"};
  for (const ScanRow& sr : sectoriality_scan(A, thetas, radii, spec, ctx.seed, ctx.threads))
    out.add_row({CsvWriter::num(sr.theta), CsvWriter::num(sr.r), CsvWriter::num(sr.estimate),
                 std::to_string(sr.iterations), sr.flag});
  out.write(ctx.path("resolvent_scan.csv"));
}

void run_calculus_bound(const RunContext& ctx) {
  auto graph = boundary_from_config(ctx.cfg);
  PullbackMap map(graph, pullback_from_config(ctx.cfg));
  HalfSpaceGrid g = grid_from_config(ctx.cfg);
  DiscreteOperator A = pullback_operator(ctx, g, map, ctx.cfg.get_num("operator.mu", 1.0));
  NormSpec spec = normspec_from_config(ctx.cfg);
  ContourSpec cs = contour_from_config(ctx.cfg);

  std::vector<SectorFunction> fam = rational_test_family();
  int nprobes = ctx.cfg.get_int("calculus.probes", 8);
  if (nprobes < 1) throw validation_error("config: calculus.probes must be positive");

  std::vector<Eigen::VectorXcd> probes(nprobes);
  std::vector<double> pnorm(nprobes);
  for (int j = 0; j < nprobes; ++j) {
    GridFunction v = gaussian_probe(g, ctx.seed, j);
    probes[j] = v.v;
    pnorm[j] = sobolev_norm(v, spec);
  }
  auto res = contour_apply_many(positive_real(A), cs, fam, probes, ctx.threads);

  CsvWriter out;
  out.header = {"function_label", "probe_id", "ratio"};
  for (size_t i = 0; i < fam.size(); ++i) {
    double hinf = fam[i].hinf_norm(cs.nu);
    for (int j = 0; j < nprobes; ++j) {
      GridFunction w = GridFunction::zero(g);
      w.v = res[i][j];
      double ratio = sobolev_norm(w, spec) / (hinf * pnorm[j]);
      out.add_row({fam[i].label, std::to_string(j), CsvWriter::num(ratio)});
    }
  }
  out.write(ctx.path("calculus_bound.csv"));
}

void run_bip_sweep(const RunContext& ctx) {
  auto graph = boundary_from_config(ctx.cfg);
  PullbackMap map(graph, pullback_from_config(ctx.cfg));
  HalfSpaceGrid g = grid_from_config(ctx.cfg);
  DiscreteOperator A = pullback_operator(ctx, g, map, ctx.cfg.get_num("operator.mu", 1.0));
  NormSpec spec = normspec_from_config(ctx.cfg);

  std::vector<double> svals = ctx.cfg.get_list("bip.s_list", "0.5,1,2,3,4,5");
  int nprobes = ctx.cfg.get_int("bip.probes", 8);
  std::vector<double> norms =
      imaginary_power_norms(A, svals, spec, nprobes, ctx.seed, ctx.threads);

  CsvWriter out;
  out.header = {"s", "norm"};
  for (size_t i = 0; i < svals.size(); ++i)
    out.add_row({CsvWriter::num(svals[i]), CsvWriter::num(norms[i])});
  out.write(ctx.path("bip_sweep.csv"));
}

void run_riesz(const RunContext& ctx) {
  auto graph = boundary_from_config(ctx.cfg);
  PullbackMap map(graph, pullback_from_config(ctx.cfg));
  HalfSpaceGrid base = grid_from_config(ctx.cfg);
  HalfSpaceGrid fine = base.refined();
  double mu = ctx.cfg.get_num("riesz.mu", 0.0);
  NormSpec spec = normspec_from_config(ctx.cfg);

  CsvWriter out;
  out.header = {"gamma", "p", "k", "level", "estimate"};
  for (double gamma : ctx.cfg.get_list("riesz.gamma_list", "0,2.5")) {
    NormSpec s{spec.k, spec.p, gamma};
    s.validate();
    for (int level = 0; level <= 1; ++level) {
      const HalfSpaceGrid& g = level == 0 ? base : fine;
      DiscreteOperator A = pullback_operator(ctx, g, map, mu);
      double est = riesz_transform_norm(A, s, ctx.seed, ctx.threads);
      out.add_row({CsvWriter::num(gamma), CsvWriter::num(s.p), std::to_string(s.k),
                   std::to_string(level), CsvWriter::num(est)});
    }
  }
  out.write(ctx.path("riesz.csv"));
}

void run_heat_mr(const RunContext& ctx) {
  auto graph = boundary_from_config(ctx.cfg);
  PullbackMap map(graph, pullback_from_config(ctx.cfg));
  HalfSpaceGrid g = grid_from_config(ctx.cfg);
  DiscreteOperator A = pullback_operator(ctx, g, map, ctx.cfg.get_num("heat.mu", 0.0));
  NormSpec spec = normspec_from_config(ctx.cfg);
  TimeGrid tg{ctx.cfg.get_num("time.t_final", 1.0), ctx.cfg.get_int("time.steps", 64)};
  tg.validate();

  GridFunction shape = GridFunction::sample(g, [&](double x, double y) {
    double lat = g.dim == 2 ? 1.0 + 0.5 * std::cos(2.0 * M_PI * y / g.lat_span) : 1.0;
    return std::complex<double>(x * std::exp(-x) * lat);
  });
  auto forcing = [&](double t) -> Eigen::VectorXcd {
    return (1.0 + 0.5 * std::cos(2.0 * M_PI * t / tg.t_final)) * shape.v;
  };
  HeatSolution sol = heat_solve(A, tg, forcing);

  CsvWriter out;
  out.header = {"q", "a", "gamma", "k", "eps", "ratio"};
  double eps = ctx.cfg.get_num("boundary.eps", 0.05);
  for (double q : ctx.cfg.get_list("heat.q_list", "2"))
    for (double a : ctx.cfg.get_list("heat.a_list", "0,0.5")) {
      double ratio = max_reg_ratio(sol, q, a, spec);
      out.add_row({CsvWriter::num(q), CsvWriter::num(a), CsvWriter::num(spec.gamma),
                   std::to_string(spec.k), CsvWriter::num(eps), CsvWriter::num(ratio)});
    }
  out.write(ctx.path("heat_mr.csv"));
}

void run_perturbation_curve(const RunContext& ctx) {
  const Config& cfg = ctx.cfg;
  HalfSpaceGrid g = grid_from_config(cfg);
  PullbackConfig pc = pullback_from_config(cfg);
  NormSpec spec = normspec_from_config(cfg);
  ContourSpec cs = contour_from_config(cfg);
  double mu = cfg.get_num("operator.mu", 1.0);
  BcKind bc = bc_from_config(cfg);
  std::string kind = cfg.get("boundary.kind", "bump");
  double lambda = cfg.get_num("boundary.lambda", 0.5);
  double radius = cfg.get_num("boundary.radius", 1.0);
  int nprobes = cfg.get_int("calculus.probes", 8);

  DiscreteOperator base = assemble_laplacian(g, bc, mu);
  std::vector<SectorFunction> fam = rational_test_family();
  double hinf_base = hinfty_bound_estimate(base, fam, spec, cs, nprobes, ctx.seed, ctx.threads);

  CsvWriter out;
  out.header = {"eps", "seminorm", "eta", "hinf_ratio"};
  for (double eps : cfg.get_list("curve.eps_list", "0.0125,0.025,0.05,0.1")) {
    auto graph = make_boundary(kind, eps, lambda, radius, g.dim);
    PullbackMap map(graph, pc);
    double semi =
        boundary_seminorm(*graph, graph->smoothness(), graph->holder(), pc.seminorm_samples);
    DiscreteOperator full = assemble_pullback_laplacian(g, map, bc, mu, ctx.threads);
    double eta = perturbation_ratio(full, base, trial_catalog_size(), spec);
    double hinf_full = hinfty_bound_estimate(full, fam, spec, cs, nprobes, ctx.seed, ctx.threads);
    out.add_row({CsvWriter::num(eps), CsvWriter::num(semi), CsvWriter::num(eta),
                 CsvWriter::num(hinf_base > 0.0 ? hinf_full / hinf_base : 0.0)});
  }
  out.write(ctx.path("perturbation_curve.csv"));
}

void write_manifest(const RunContext& ctx, const std::string& name, double wall_s) {
  std::ofstream out(ctx.path("manifest.txt"), std::ios::binary);
  if (!out) throw validation_error("cannot write manifest in " + ctx.out_dir);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", wall_s);
  out << "# version " << version_string() << "\n"
      << "# experiment " << name << "\n"
      << "# wall_time_s " << buf << "\n\n"
      << ctx.cfg.resolved_text();
}

}  // namespace

void run_experiment(const Config& cfg, const std::string& out_dir, int threads, uint64_t seed) {
  std::string name = cfg.require("run.experiment");
  auto names = experiment_names();
  if (std::find(names.begin(), names.end(), name) == names.end())
    throw validation_error("config: unknown experiment " + name);
  int th = threads > 0 ? threads : cfg.get_int("run.threads", 1);
  if (th < 1) throw validation_error("config: run.threads must be positive");
  uint64_t sd = seed != 0 ? seed : (uint64_t)cfg.get_num("run.seed", 12345);

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw validation_error("cannot create output directory " + out_dir);

  RunContext ctx{cfg, out_dir, th, sd};
  auto t0 = std::chrono::steady_clock::now();
  if (name == "geometry-check")
    run_geometry_check(ctx);
  else if (name == "hardy")
    run_hardy(ctx);
  else if (name == "resolvent-scan")
    run_resolvent_scan(ctx);
  else if (name == "calculus-bound")
    run_calculus_bound(ctx);
  else if (name == "bip-sweep")
    run_bip_sweep(ctx);
  else if (name == "riesz")
    run_riesz(ctx);
  else if (name == "heat-mr")
    run_heat_mr(ctx);
  else
    run_perturbation_curve(ctx);
  double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_manifest(ctx, name, wall);
}

}  // namespace flatcal
