#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Sparse>

#include "calculus/sector_function.h"
#include "operators/assemble.h"
#include "spaces/grid.h"

namespace flatcal {

// sector boundary discretized in log-radius; trapezoid weights
struct ContourSpec {
  double nu = M_PI / 4.0;
  double r_min = 1e-7;
  double r_max = 1e8;
  int nodes_per_decade = 16;

  void validate() const;
  std::vector<double> log_nodes() const;
  std::vector<double> weights() const;
};

// mu I - M as a real sparse matrix
SpMat positive_real(const DiscreteOperator& A);

// results[i][j] = f_i(S) v_j; one factorization per contour node, shared
// across all functions and probes; reduction over a fixed block count so the
// result does not depend on the thread count
std::vector<std::vector<Eigen::VectorXcd>> contour_apply_many(
    const SpMat& S, const ContourSpec& spec, const std::vector<SectorFunction>& fs,
    const std::vector<Eigen::VectorXcd>& probes, int threads);

GridFunction apply_function(const DiscreteOperator& A, const SectorFunction& f,
                            const GridFunction& v, const ContourSpec& spec, int threads);

}  // namespace flatcal
