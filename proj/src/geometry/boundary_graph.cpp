#include "geometry/boundary_graph.h"

#include <cassert>
#include <cmath>
#include <cstring>

#include "common/errors.h"
#include "common/multiindex.h"
#include "common/rng.h"

namespace flatcal {

BoundaryGraph::BoundaryGraph(int dim, int ell, double lambda, double radius, std::string kind)
    : dim_(dim), smoothness_(ell), holder_(lambda), radius_(radius), kind_(std::move(kind)) {}

namespace {

double sqr(double v) { return v * v; }

double radius_of(const double* xt, int n) {
  double s = 0.0;
  for (int j = 0; j < n; ++j) s += xt[j] * xt[j];
  return std::sqrt(s);
}

class ZeroGraph final : public BoundaryGraph {
 public:
  explicit ZeroGraph(int dim) : BoundaryGraph(dim, 4, 1.0, 1.0, "zero") {}
  double eval(const double*) const override { return 0.0; }
  double deriv(const std::vector<int>&, const double*) const override { return 0.0; }
  std::vector<double> singular_radii() const override { return {}; }
};

// eps * (1 - (r/R)^2)^2 on r < R; C^{1,1} across r = R
class BumpGraph final : public BoundaryGraph {
 public:
  BumpGraph(int dim, double eps, double radius)
      : BoundaryGraph(dim, 1, 1.0, radius, "bump"), eps_(eps) {}

  double eval(const double* xt) const override {
    double s = 0.0;
    for (int j = 0; j < lat_dim(); ++j) s += sqr(xt[j] / radius_);
    if (s >= 1.0) return 0.0;
    return eps_ * sqr(1.0 - s);
  }

  double deriv(const std::vector<int>& alpha, const double* xt) const override {
    int total = multi_total(alpha);
    if (total == 0) return eval(xt);
    if (total > 1) throw validation_error("bump graph: derivative order exceeds smoothness 1");
    double s = 0.0;
    for (int j = 0; j < lat_dim(); ++j) s += sqr(xt[j] / radius_);
    if (s >= 1.0) return 0.0;
    int axis = -1;
    for (int j = 0; j < lat_dim(); ++j)
      if (alpha[j] == 1) axis = j;
    return -4.0 * eps_ * xt[axis] * (1.0 - s) / sqr(radius_);
  }

  std::vector<double> singular_radii() const override { return {radius_}; }

 private:
  double eps_;
};

// smooth cutoff: 1 on s<=1/2, 0 on s>=1
double cutoff_f(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }
double cutoff_fp(double t) { return t > 0.0 ? std::exp(-1.0 / t) / (t * t) : 0.0; }

double cutoff(double s) {
  double a = cutoff_f(2.0 * (1.0 - s));
  double b = cutoff_f(2.0 * s - 1.0);
  return a / (a + b);
}

double cutoff_prime(double s) {
  double a = cutoff_f(2.0 * (1.0 - s));
  double b = cutoff_f(2.0 * s - 1.0);
  double ap = -2.0 * cutoff_fp(2.0 * (1.0 - s));
  double bp = 2.0 * cutoff_fp(2.0 * s - 1.0);
  double den = sqr(a + b);
  return (ap * b - a * bp) / den;
}

// eps * r^{1+lambda} * cutoff(r/R); C^{1,lambda} at the tip r = 0
class ConeGraph final : public BoundaryGraph {
 public:
  ConeGraph(int dim, double eps, double lambda, double radius)
      : BoundaryGraph(dim, 1, lambda, radius, "cone_smoothed"), eps_(eps) {}

  double eval(const double* xt) const override {
    double r = radius_of(xt, lat_dim());
    if (r >= radius_) return 0.0;
    return eps_ * std::pow(r, 1.0 + holder_) * cutoff(r / radius_);
  }

  double deriv(const std::vector<int>& alpha, const double* xt) const override {
    int total = multi_total(alpha);
    if (total == 0) return eval(xt);
    if (total > 1) throw validation_error("cone graph: derivative order exceeds smoothness 1");
    double r = radius_of(xt, lat_dim());
    if (r >= radius_ || r < 1e-300) return 0.0;
    int axis = -1;
    for (int j = 0; j < lat_dim(); ++j)
      if (alpha[j] == 1) axis = j;
    double chi = cutoff(r / radius_);
    double chip = cutoff_prime(r / radius_);
    double core = (1.0 + holder_) * std::pow(r, holder_ - 1.0) * chi +
                  std::pow(r, holder_) * chip / radius_;
    return eps_ * xt[axis] * core;
  }

  std::vector<double> singular_radii() const override { return {0.0}; }

 private:
  double eps_;
};

}  // namespace

std::shared_ptr<const BoundaryGraph> make_boundary(const std::string& kind, double eps,
                                                   double lambda, double radius, int dim) {
  if (dim < 2) throw validation_error("boundary graph: dim must be >= 2");
  if (kind == "zero") return std::make_shared<ZeroGraph>(dim);
  if (radius <= 0.0) throw validation_error("boundary graph: support radius must be positive");
  if (kind == "bump") return std::make_shared<BumpGraph>(dim, eps, radius);
  if (kind == "cone_smoothed") {
    if (lambda <= 0.0 || lambda >= 1.0)
      throw validation_error("cone_smoothed: lambda must lie in (0,1)");
    return std::make_shared<ConeGraph>(dim, eps, lambda, radius);
  }
  throw validation_error("unknown boundary kind: " + kind);
}

double boundary_seminorm(const BoundaryGraph& g, int ell, double lambda, uint64_t sample_count) {
  if (ell < 0 || ell > g.smoothness())
    throw validation_error("seminorm: derivative order exceeds graph smoothness");
  if (lambda <= 0.0 || lambda > 1.0) throw validation_error("seminorm: lambda must lie in (0,1]");
  int D = g.lat_dim();
  double R = g.support_radius();
  double span = R + 0.5;

  std::vector<std::vector<int>> top;
  multi_indices_exact(D, ell, top);
  std::vector<std::vector<int>> lower;
  for (int m = 0; m <= ell; ++m) multi_indices_exact(D, m, lower);

  QuasiSequence seq(2 * D + 1);
  std::vector<double> u(2 * D + 1), x(D), y(D);
  double sup_all = 0.0, quot = 0.0;
  for (uint64_t n = 0; n < sample_count; ++n) {
    seq.point(n, u.data());
    for (int j = 0; j < D; ++j) x[j] = (2.0 * u[j] - 1.0) * span;
    // partner point across several distance decades
    double dist = 2.0 * R * std::pow(10.0, -5.0 * u[D]);
    double dn = 0.0;
    for (int j = 0; j < D; ++j) {
      y[j] = 2.0 * u[D + 1 + j] - 1.0;
      dn += y[j] * y[j];
    }
    dn = std::sqrt(dn);
    if (dn < 1e-12) {
      y.assign(D, 0.0);
      y[0] = 1.0;
      dn = 1.0;
    }
    for (int j = 0; j < D; ++j) y[j] = x[j] + y[j] / dn * dist;

    for (const auto& a : lower) {
      double vx = std::abs(g.deriv(a, x.data()));
      if (vx > sup_all) sup_all = vx;
    }
    for (const auto& a : top) {
      double vx = g.deriv(a, x.data());
      double vy = g.deriv(a, y.data());
      double q = std::abs(vx - vy) / std::pow(dist, lambda);
      if (q > quot) quot = q;
    }
  }
  return sup_all + quot;
}

}  // namespace flatcal
