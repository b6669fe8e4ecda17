#pragma once
#include <complex>
#include <vector>

#include "operators/assemble.h"

namespace flatcal {

// solves (lambda - A) u = f with a direct factorization; enforces the
// residual contract ||(lambda - A)u - f|| <= 1e-9 ||f||
GridFunction resolvent_solve(const DiscreteOperator& A, std::complex<double> lambda,
                             const GridFunction& f);

// direct solve of (z - S) u = b for the positive form S = mu - M
Eigen::VectorXcd shifted_solve(const SpMatC& S, std::complex<double> z,
                               const Eigen::VectorXcd& b);

// Lanczos in the cell-weight inner product on the positive form; returns the
// Ritz values after `steps` iterations
std::vector<double> lanczos_ritz_values(const DiscreteOperator& A, int steps);

}  // namespace flatcal
