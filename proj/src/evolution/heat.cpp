#include "evolution/heat.h"

#include <cmath>

#include <Eigen/SparseLU>

#include "calculus/contour.h"
#include "common/errors.h"

namespace flatcal {

void TimeGrid::validate() const {
  if (!(t_final > 0.0)) throw validation_error("time grid: final time must be positive");
  if (steps < 1) throw validation_error("time grid: need at least one step");
}

HeatSolution heat_solve(const DiscreteOperator& A, const TimeGrid& tg,
                        const std::function<Eigen::VectorXcd(double)>& forcing) {
  tg.validate();
  const Eigen::Index n = A.M.rows();
  SpMat S = positive_real(A);
  double tau = tg.tau();
  SpMat C = S;
  for (int i = 0; i < n; ++i) C.coeffRef(i, i) += 1.0 / tau;
  C.makeCompressed();
  Eigen::SparseLU<SpMat> lu;
  lu.compute(C);
  if (lu.info() != Eigen::Success) throw numeric_error("heat: step factorization failed");

  HeatSolution sol;
  sol.grid = A.grid;
  sol.tgrid = tg;
  sol.u.assign(tg.steps + 1, Eigen::VectorXcd::Zero(n));
  sol.dudt.resize(tg.steps);
  sol.su.resize(tg.steps);
  sol.f.resize(tg.steps);

  for (int k = 0; k < tg.steps; ++k) {
    Eigen::VectorXcd fk = forcing(tg.time(k + 1));
    if (fk.size() != n) throw validation_error("heat: forcing length mismatch");
    Eigen::VectorXcd rhs = sol.u[k] / tau + fk;
    Eigen::VectorXcd uk = lu.solve(rhs.real().eval()) +
                          std::complex<double>(0.0, 1.0) * lu.solve(rhs.imag().eval());
    sol.u[k + 1] = uk;
    sol.dudt[k] = (uk - sol.u[k]) / tau;
    sol.su[k] = (S * uk.real()).eval() + std::complex<double>(0.0, 1.0) * (S * uk.imag()).eval();
    sol.f[k] = fk;
  }
  return sol;
}

namespace {

double stacked_q_norm(const HalfSpaceGrid& g, const std::vector<Eigen::VectorXcd>& vals,
                      const std::vector<double>& w, double q, const NormSpec& spec) {
  double acc = 0.0;
  for (size_t k = 0; k < vals.size(); ++k) {
    GridFunction f = GridFunction::zero(g);
    f.v = vals[k];
    acc += w[k] * std::pow(sobolev_norm(f, spec), q);
  }
  return std::pow(acc, 1.0 / q);
}

}  // namespace

double max_reg_ratio(const HeatSolution& sol, double q, double a, const NormSpec& spec) {
  spec.validate();
  if (!(q > 1.0 && q <= 1e6)) throw validation_error("max regularity: q must lie in (1, 1e6]");
  if (!(a >= 0.0 && a < q - 1.0))
    throw validation_error("max regularity: weight power must lie in [0, q-1)");
  if (!sol.grid || sol.dudt.empty()) throw validation_error("max regularity: empty solution");

  const TimeGrid& tg = sol.tgrid;
  std::vector<double> w(tg.steps);
  w[0] = std::pow(tg.time(1), a + 1.0) / (a + 1.0);
  for (int k = 1; k < tg.steps; ++k)
    w[k] = tg.tau() * std::pow(0.5 * (tg.time(k) + tg.time(k + 1)), a);

  double den = stacked_q_norm(*sol.grid, sol.f, w, q, spec);
  if (den <= 0.0) throw validation_error("max regularity: forcing has zero norm");
  double num = stacked_q_norm(*sol.grid, sol.dudt, w, q, spec) +
               stacked_q_norm(*sol.grid, sol.su, w, q, spec);
  return num / den;
}

}  // namespace flatcal
