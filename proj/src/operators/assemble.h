#pragma once
#include <complex>
#include <string>

#include <Eigen/Sparse>

#include "geometry/pullback.h"
#include "spaces/grid.h"

namespace flatcal {

using SpMat = Eigen::SparseMatrix<double>;
using SpMatC = Eigen::SparseMatrix<std::complex<double>>;

enum class BcKind { dirichlet, neumann };

BcKind bc_from_string(const std::string& s);

struct DiscreteOperator {
  const HalfSpaceGrid* grid = nullptr;
  BcKind bc = BcKind::dirichlet;
  double mu = 0.0;  // shift making mu*I - M the positive sectorial form
  std::string label;
  SpMat M;

  SpMatC positive() const;  // mu*I - M in complex storage
};

// flux-form Laplacian: 3-point graded normal stencil symmetric in the cell
// weights, periodic 3-point lateral stencil; wall bc by elimination, far end
// always homogeneous Dirichlet
DiscreteOperator assemble_laplacian(const HalfSpaceGrid& g, BcKind bc, double mu);

// transformed Laplacian: Laplacian plus the flattening perturbation
// (c1 - 2 c2_1) d11 - 2 sum_j c2_j dlat_j d1 - c3 d1
DiscreteOperator assemble_pullback_laplacian(const HalfSpaceGrid& g, const PullbackMap& map,
                                             BcKind bc, double mu, int threads = 1);

SpMat d1_matrix(const HalfSpaceGrid& g, BcKind bc);   // normal first derivative
SpMat d11_matrix(const HalfSpaceGrid& g, BcKind bc);  // normal second derivative
SpMat dlat_matrix(const HalfSpaceGrid& g);            // lateral first derivative, periodic

void export_operator(const DiscreteOperator& A, const std::string& path);

}  // namespace flatcal
