#pragma once

#include <complex>
#include <functional>

#include <Eigen/Dense>

#include "evolution/heat.h"
#include "geometry/boundary_graph.h"
#include "operators/assemble.h"

namespace flatcal {
namespace oracle {

// adaptive-Simpson quadrature of fn over [a, b] to absolute tolerance tol
double integrate(const std::function<double(double)>& fn, double a, double b, double tol);

// smoothed height average for lateral dimension 1, built from scratch with
// adaptive quadrature (independent of the production Gauss rules)
double h2_value(const BoundaryGraph& g, double L, double tau, double xt);

// bisection solve of tau = x1 - h2(tau, xt)
double rho_value(const BoundaryGraph& g, double L, double x1, double xt);

// dense eigensystem of S = mu - M symmetrized by the cell weights; only valid
// when S is weight-symmetric (plain Laplacians)
struct DenseEig {
  Eigen::VectorXd lambda;
  Eigen::MatrixXd q;      // orthonormal columns of the symmetrized matrix
  Eigen::VectorXd wsqrt;  // cell-weight square roots

  // dense matrix of f(S)
  Eigen::MatrixXcd apply(const std::function<std::complex<double>(double)>& f) const;
};
DenseEig dense_eig(const DiscreteOperator& A);

// sigma_max of diag(sqrt(w)) T diag(1/sqrt(w)) where w = cell weight * x1^gamma,
// tiled across the row blocks of T
double dense_weighted_norm(const DiscreteOperator& A, const Eigen::MatrixXcd& T, double gamma);

// dense-solver implicit Euler replica of heat_solve
HeatSolution dense_heat(const DiscreteOperator& A, const TimeGrid& tg,
                        const std::function<Eigen::VectorXcd(double)>& forcing);

}  // namespace oracle
}  // namespace flatcal
