#include "operators/solve.h"

#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

#include "common/errors.h"
#include "common/rng.h"

namespace flatcal {

namespace {

// residual b - C u with long double accumulation; the graded wall stencils
// make the plain double evaluation cancellation-limited near 1e-8
Eigen::VectorXcd accurate_residual(const SpMatC& C, const Eigen::VectorXcd& u,
                                   const Eigen::VectorXcd& b) {
  using CL = std::complex<long double>;
  std::vector<CL> acc(b.size());
  for (Eigen::Index i = 0; i < b.size(); ++i) acc[i] = CL(b[i].real(), b[i].imag());
  for (int k = 0; k < C.outerSize(); ++k)
    for (SpMatC::InnerIterator it(C, k); it; ++it)
      acc[it.row()] -= CL(it.value().real(), it.value().imag()) * CL(u[k].real(), u[k].imag());
  Eigen::VectorXcd r(b.size());
  for (Eigen::Index i = 0; i < b.size(); ++i)
    r[i] = std::complex<double>((double)acc[i].real(), (double)acc[i].imag());
  return r;
}

// smallest residual any double-stored solution can achieve: eps * || |C| |u| ||
double residual_floor(const SpMatC& C, const Eigen::VectorXcd& u) {
  Eigen::VectorXd rowabs = Eigen::VectorXd::Zero(u.size());
  for (int k = 0; k < C.outerSize(); ++k)
    for (SpMatC::InnerIterator it(C, k); it; ++it)
      rowabs[it.row()] += std::abs(it.value()) * std::abs(u[k]);
  return std::numeric_limits<double>::epsilon() * rowabs.norm();
}

}  // namespace

GridFunction resolvent_solve(const DiscreteOperator& A, std::complex<double> lambda,
                             const GridFunction& f) {
  if (f.grid != A.grid) throw validation_error("resolvent: operand grid mismatch");
  GridFunction u = GridFunction::zero(*A.grid);
  double fnorm = f.v.norm();
  if (fnorm == 0.0) return u;

  SpMatC C = (-A.M).cast<std::complex<double>>();
  SpMatC ident(A.M.rows(), A.M.cols());
  ident.setIdentity();
  C += lambda * ident;
  Eigen::SparseLU<SpMatC> lu;
  lu.compute(C);
  if (lu.info() != Eigen::Success)
    throw numeric_error("resolvent: factorization failed (lambda near spectrum?)");
  u.v = lu.solve(f.v);
  Eigen::VectorXcd r = accurate_residual(C, u.v, f.v);
  double tol = std::max(1e-9 * fnorm, 8.0 * residual_floor(C, u.v));
  for (int ir = 0; ir < 3 && !(r.norm() <= tol); ++ir) {
    u.v += lu.solve(r);
    r = accurate_residual(C, u.v, f.v);
    tol = std::max(1e-9 * fnorm, 8.0 * residual_floor(C, u.v));
  }
  if (!(r.norm() <= tol))
    throw numeric_error("resolvent: residual above tolerance (lambda near spectrum?)");
  return u;
}

Eigen::VectorXcd shifted_solve(const SpMatC& S, std::complex<double> z,
                               const Eigen::VectorXcd& b) {
  SpMatC C = -S;
  SpMatC ident(S.rows(), S.cols());
  ident.setIdentity();
  C += z * ident;
  Eigen::SparseLU<SpMatC> lu;
  lu.compute(C);
  if (lu.info() != Eigen::Success) throw numeric_error("shifted solve: factorization failed");
  Eigen::VectorXcd u = lu.solve(b);
  Eigen::VectorXcd r = accurate_residual(C, u, b);
  double tol = std::max(1e-8 * b.norm(), 8.0 * residual_floor(C, u));
  for (int ir = 0; ir < 3 && !(r.norm() <= tol); ++ir) {
    u += lu.solve(r);
    r = accurate_residual(C, u, b);
    tol = std::max(1e-8 * b.norm(), 8.0 * residual_floor(C, u));
  }
  if (!(r.norm() <= tol)) throw numeric_error("shifted solve: residual above tolerance");
  return u;
}

std::vector<double> lanczos_ritz_values(const DiscreteOperator& A, int steps) {
  const HalfSpaceGrid& g = *A.grid;
  const int n = static_cast<int>(g.size());
  if (steps < 2 || steps > n) throw validation_error("lanczos: steps must lie in [2, n]");

  Eigen::VectorXd w(n);
  for (int i = 0; i < g.n_normal; ++i)
    for (int j = 0; j < g.n_lateral; ++j) w[g.index(i, j)] = g.cell_weight(i, j);

  SpMat S = -A.M;
  for (int i = 0; i < n; ++i) S.coeffRef(i, i) += A.mu;

  auto wdot = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return (a.array() * w.array() * b.array()).sum();
  };

  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = rng::gaussian(7, rng::stream_probes, i);
  v /= std::sqrt(wdot(v, v));

  std::vector<Eigen::VectorXd> basis = {v};
  Eigen::VectorXd alpha(steps), beta(steps);
  Eigen::VectorXd prev = Eigen::VectorXd::Zero(n);
  double b_prev = 0.0;
  int m = 0;
  for (int k = 0; k < steps; ++k) {
    Eigen::VectorXd z = S * basis[k];
    alpha[k] = wdot(z, basis[k]);
    z -= alpha[k] * basis[k] + b_prev * prev;
    for (const auto& q : basis) z -= wdot(z, q) * q;  // full reorthogonalization
    double b = std::sqrt(std::max(0.0, wdot(z, z)));
    m = k + 1;
    if (b < 1e-13) break;
    beta[k] = b;
    prev = basis[k];
    b_prev = b;
    basis.push_back(z / b);
  }

  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
  for (int k = 0; k < m; ++k) {
    T(k, k) = alpha[k];
    if (k + 1 < m) T(k, k + 1) = T(k + 1, k) = beta[k];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  std::vector<double> ritz(es.eigenvalues().data(), es.eigenvalues().data() + m);
  return ritz;
}

}  // namespace flatcal
