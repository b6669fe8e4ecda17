#include "support/oracles.h"

#include <cmath>

#include "calculus/contour.h"
#include "common/errors.h"

namespace flatcal {
namespace oracle {

namespace {

double simpson(const std::function<double(double)>& fn, double a, double m, double b, double fa,
               double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& fn, double a, double m, double b, double fa,
             double fm, double fb, double whole, double tol, int depth) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = fn(lm), frm = fn(rm);
  double left = simpson(fn, a, lm, m, fa, flm, fm);
  double right = simpson(fn, m, rm, b, fm, frm, fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adapt(fn, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adapt(fn, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& fn, double a, double b, double tol) {
  if (!(b > a)) return 0.0;
  // uniform pre-split so narrowly supported integrands cannot alias to zero
  const int panels = 32;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    double pa = a + (b - a) * p / panels, pb = a + (b - a) * (p + 1) / panels;
    double m = 0.5 * (pa + pb);
    double fa = fn(pa), fm = fn(m), fb = fn(pb);
    total += adapt(fn, pa, m, pb, fa, fm, fb, simpson(fn, pa, m, pb, fa, fm, fb), tol / panels, 40);
  }
  return total;
}

namespace {

// raw bump and its normalized scaled version, rebuilt from the definition
double raw_bump(double u) {
  double d = 1.0 - u * u;
  return d > 0.0 ? std::exp(-1.0 / d) : 0.0;
}

struct Axis {
  double halfwidth;
  double inv_norm;
  explicit Axis(double w) : halfwidth(w) {
    double mass = integrate(raw_bump, -1.0, 1.0, 1e-14);
    inv_norm = 1.0 / (mass * w);
  }
  double eval(double t) const { return inv_norm * raw_bump(t / halfwidth); }
};

}  // namespace

double h2_value(const BoundaryGraph& g, double L, double tau, double xt) {
  if (g.lat_dim() != 1) throw validation_error("oracle h2: lateral dimension 1 only");
  Axis lat(1.0 / std::sqrt(2.0));
  auto integrand = [&](double z) {
    double arg = xt - (tau / L) * z;
    return g.eval(&arg) * lat.eval(z);
  };
  return integrate(integrand, -lat.halfwidth, lat.halfwidth, 1e-13);
}

double rho_value(const BoundaryGraph& g, double L, double x1, double xt) {
  auto G = [&](double tau) { return tau - x1 + h2_value(g, L, tau, xt); };
  double span = std::max(1.0, 4.0 * std::abs(x1));
  double lo = x1 - span, hi = x1 + span;
  double glo = G(lo), ghi = G(hi);
  if (!(glo <= 0.0 && ghi >= 0.0)) throw numeric_error("oracle rho: bracket failed");
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    double gm = G(mid);
    if (gm <= 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

DenseEig dense_eig(const DiscreteOperator& A) {
  const HalfSpaceGrid& g = *A.grid;
  Eigen::MatrixXd S = Eigen::MatrixXd(positive_real(A));
  Eigen::VectorXd wsqrt(g.size());
  for (int i = 0; i < g.n_normal; ++i)
    for (int j = 0; j < g.n_lateral; ++j)
      wsqrt[g.index(i, j)] = std::sqrt(g.cell_weight(i, j));
  Eigen::MatrixXd sym = wsqrt.asDiagonal() * S * wsqrt.cwiseInverse().asDiagonal();
  double asym = (sym - sym.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9 * sym.cwiseAbs().maxCoeff())
    throw numeric_error("dense oracle: operator is not weight-symmetric");
  sym = 0.5 * (sym + sym.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  if (es.info() != Eigen::Success) throw numeric_error("dense oracle: eigensolve failed");
  return DenseEig{es.eigenvalues(), es.eigenvectors(), wsqrt};
}

Eigen::MatrixXcd DenseEig::apply(const std::function<std::complex<double>(double)>& f) const {
  Eigen::VectorXcd fd(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) fd[i] = f(lambda[i]);
  Eigen::MatrixXcd core = q.cast<std::complex<double>>() * fd.asDiagonal() *
                          q.transpose().cast<std::complex<double>>();
  return wsqrt.cwiseInverse().cast<std::complex<double>>().asDiagonal() * core *
         wsqrt.cast<std::complex<double>>().asDiagonal();
}

double dense_weighted_norm(const DiscreteOperator& A, const Eigen::MatrixXcd& T, double gamma) {
  const HalfSpaceGrid& g = *A.grid;
  const Eigen::Index n = (Eigen::Index)g.size();
  if (T.cols() != n || T.rows() % n != 0)
    throw validation_error("dense oracle: operator block shape mismatch");
  Eigen::VectorXd w(n);
  for (int i = 0; i < g.n_normal; ++i)
    for (int j = 0; j < g.n_lateral; ++j)
      w[g.index(i, j)] = g.cell_weight(i, j) * std::pow(g.xn[i], gamma);
  Eigen::VectorXd ws = w.array().sqrt();
  Eigen::MatrixXcd B = T * ws.cwiseInverse().cast<std::complex<double>>().asDiagonal();
  for (Eigen::Index b = 0; b * n < T.rows(); ++b)
    B.middleRows(b * n, n) = ws.cast<std::complex<double>>().asDiagonal() * B.middleRows(b * n, n);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(B);
  return svd.singularValues().maxCoeff();
}

HeatSolution dense_heat(const DiscreteOperator& A, const TimeGrid& tg,
                        const std::function<Eigen::VectorXcd(double)>& forcing) {
  tg.validate();
  const Eigen::Index n = A.M.rows();
  Eigen::MatrixXd S = Eigen::MatrixXd(positive_real(A));
  Eigen::MatrixXd C = S + Eigen::MatrixXd::Identity(n, n) / tg.tau();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(C);

  HeatSolution sol;
  sol.grid = A.grid;
  sol.tgrid = tg;
  sol.u.assign(tg.steps + 1, Eigen::VectorXcd::Zero(n));
  sol.dudt.resize(tg.steps);
  sol.su.resize(tg.steps);
  sol.f.resize(tg.steps);
  for (int k = 0; k < tg.steps; ++k) {
    Eigen::VectorXcd fk = forcing(tg.time(k + 1));
    Eigen::VectorXcd rhs = sol.u[k] / tg.tau() + fk;
    Eigen::VectorXcd uk = lu.solve(rhs.real().eval()) +
                          std::complex<double>(0.0, 1.0) * lu.solve(rhs.imag().eval());
    sol.u[k + 1] = uk;
    sol.dudt[k] = (uk - sol.u[k]) / tg.tau();
    sol.su[k] = (S * uk.real()).eval().cast<std::complex<double>>() +
                std::complex<double>(0.0, 1.0) * (S * uk.imag()).eval().cast<std::complex<double>>();
    sol.f[k] = fk;
  }
  return sol;
}

}  // namespace oracle
}  // namespace flatcal
