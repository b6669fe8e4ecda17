#pragma once

#include <functional>
#include <vector>

#include <Eigen/Sparse>

#include "operators/assemble.h"
#include "spaces/norms.h"

namespace flatcal {

struct TimeGrid {
  double t_final = 1.0;
  int steps = 64;

  void validate() const;
  double tau() const { return t_final / steps; }
  double time(int k) const { return t_final * k / steps; }
};

struct HeatSolution {
  const HalfSpaceGrid* grid = nullptr;
  TimeGrid tgrid;
  std::vector<Eigen::VectorXcd> u;     // u[0] = 0, then one state per step
  std::vector<Eigen::VectorXcd> dudt;  // backward differences, dudt[k] at step k+1
  std::vector<Eigen::VectorXcd> su;    // S u at step k+1
  std::vector<Eigen::VectorXcd> f;     // forcing at step k+1
};

// implicit Euler for u' + S u = f, u(0) = 0, S = mu I - M
HeatSolution heat_solve(const DiscreteOperator& A, const TimeGrid& tg,
                        const std::function<Eigen::VectorXcd(double)>& forcing);

// ((sum_n w_n ||du_n||^q)^{1/q} + (sum_n w_n ||S u_n||^q)^{1/q}) over the same
// sum for f, with power weight t^a integrated exactly over the first cell
double max_reg_ratio(const HeatSolution& sol, double q, double a, const NormSpec& spec);

}  // namespace flatcal
