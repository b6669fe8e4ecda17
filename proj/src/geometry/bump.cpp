#include "geometry/bump.h"

#include <cassert>
#include <cmath>
#include <mutex>
#include <vector>

#include "common/quadrature.h"

namespace flatcal {

namespace {

using Poly = std::vector<double>;  // coefficient i multiplies u^i

Poly poly_derivative(const Poly& p) {
  Poly d(p.size() > 1 ? p.size() - 1 : 1, 0.0);
  for (size_t i = 1; i < p.size(); ++i) d[i - 1] = p[i] * static_cast<double>(i);
  return d;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly c(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

void poly_add(Poly& a, const Poly& b) {
  if (b.size() > a.size()) a.resize(b.size(), 0.0);
  for (size_t i = 0; i < b.size(); ++i) a[i] += b[i];
}

double poly_eval(const Poly& p, double u) {
  double v = 0.0;
  for (size_t i = p.size(); i-- > 0;) v = v * u + p[i];
  return v;
}

// P_n cache; P_0 = 1
const Poly& bump_poly(int n) {
  static std::mutex mu;
  static std::vector<Poly> cache = {Poly{1.0}};
  std::lock_guard<std::mutex> lock(mu);
  const Poly one_minus_u2_sq = {1.0, 0.0, -2.0, 0.0, 1.0};
  while (static_cast<int>(cache.size()) <= n) {
    int m = static_cast<int>(cache.size()) - 1;
    const Poly& pm = cache[m];
    Poly next = poly_mul(one_minus_u2_sq, poly_derivative(pm));
    Poly mid = poly_mul(Poly{0.0, 4.0 * m, 0.0, -4.0 * m}, pm);  // 4mu(1-u^2)
    poly_add(next, mid);
    Poly last = poly_mul(Poly{0.0, -2.0}, pm);  // -2u
    poly_add(next, last);
    cache.push_back(std::move(next));
  }
  return cache[n];
}

}  // namespace

double bump_eval(double u) {
  double s = 1.0 - u * u;
  if (s <= 0.0) return 0.0;
  return std::exp(-1.0 / s);
}

double bump_deriv(int n, double u) {
  assert(n >= 0);
  if (n == 0) return bump_eval(u);
  double s = 1.0 - u * u;
  if (s <= 0.0) return 0.0;
  double b = std::exp(-1.0 / s);
  return poly_eval(bump_poly(n), u) / std::pow(s, 2 * n) * b;
}

double bump_mass() {
  static const double mass = [] {
    const GaussRule& g = gauss_rule(200);
    double acc = 0.0;
    for (size_t i = 0; i < g.x.size(); ++i) acc += g.w[i] * bump_eval(g.x[i]);
    return acc;
  }();
  return mass;
}

ScaledBump ScaledBump::make(double halfwidth) {
  assert(halfwidth > 0.0);
  ScaledBump s;
  s.halfwidth = halfwidth;
  s.inv_norm = 1.0 / (halfwidth * bump_mass());
  return s;
}

double ScaledBump::eval(double t) const { return inv_norm * bump_eval(t / halfwidth); }

double ScaledBump::deriv(int n, double t) const {
  return inv_norm * bump_deriv(n, t / halfwidth) / std::pow(halfwidth, n);
}

}  // namespace flatcal
