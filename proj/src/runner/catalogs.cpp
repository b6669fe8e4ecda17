#include "runner/catalogs.h"

#include "common/errors.h"

namespace flatcal {

std::shared_ptr<const BoundaryGraph> boundary_from_config(const Config& cfg) {
  std::string kind = cfg.get("boundary.kind", "bump");
  double eps = cfg.get_num("boundary.eps", 0.05);
  double lambda = cfg.get_num("boundary.lambda", 0.5);
  double radius = cfg.get_num("boundary.radius", 1.0);
  int dim = cfg.get_int("grid.dim", 2);
  return make_boundary(kind, eps, lambda, radius, dim);
}

HalfSpaceGrid grid_from_config(const Config& cfg) {
  int dim = cfg.get_int("grid.dim", 2);
  return HalfSpaceGrid::make(dim, cfg.get_num("grid.x_max", 40.0),
                             cfg.get_int("grid.n_normal", 64), cfg.get_num("grid.grading", 0.85),
                             cfg.get_num("grid.lat_span", 4.0), cfg.get_int("grid.n_lateral", 32));
}

NormSpec normspec_from_config(const Config& cfg) {
  NormSpec spec{cfg.get_int("norm.k", 0), cfg.get_num("norm.p", 2.0),
                cfg.get_num("norm.gamma", 0.5)};
  spec.validate();
  return spec;
}

ContourSpec contour_from_config(const Config& cfg) {
  ContourSpec cs;
  cs.nu = cfg.get_num("contour.nu", cs.nu);
  cs.r_min = cfg.get_num("contour.r_min", cs.r_min);
  cs.r_max = cfg.get_num("contour.r_max", cs.r_max);
  cs.nodes_per_decade = cfg.get_int("contour.nodes_per_decade", cs.nodes_per_decade);
  cs.validate();
  return cs;
}

PullbackConfig pullback_from_config(const Config& cfg) {
  PullbackConfig pc;
  pc.quad_order = cfg.get_int("pullback.quad_order", pc.quad_order);
  pc.fp_tol = cfg.get_num("pullback.fp_tol", pc.fp_tol);
  pc.fp_max_iter = cfg.get_int("pullback.fp_max_iter", pc.fp_max_iter);
  pc.seminorm_samples = cfg.get_int("pullback.seminorm_samples", pc.seminorm_samples);
  if (pc.quad_order < 8) throw validation_error("config: pullback.quad_order must be at least 8");
  if (!(pc.fp_tol > 0.0)) throw validation_error("config: pullback.fp_tol must be positive");
  if (pc.fp_max_iter < 4) throw validation_error("config: pullback.fp_max_iter must be at least 4");
  if (pc.seminorm_samples < 100)
    throw validation_error("config: pullback.seminorm_samples must be at least 100");
  return pc;
}

BcKind bc_from_config(const Config& cfg) { return bc_from_string(cfg.get("operator.bc", "dirichlet")); }

}  // namespace flatcal
