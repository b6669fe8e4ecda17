#include "geometry/pullback.h"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>

#include "common/errors.h"
#include "common/multiindex.h"
#include "common/quadrature.h"
#include "common/rng.h"

namespace flatcal {

namespace {

constexpr double kRoot2 = 1.4142135623730951;

double golden_minimize(const std::function<double(double)>& f, double a, double b, int iters) {
  const double gr = 0.6180339887498949;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? fc : fd;
}

}  // namespace

// Sum of terms coeff * prod_j z_j^{m_j} * phi_axis^{(n_j)}(z_j). Closed under
// the two substituted-kernel derivative rules, so derivatives of h2 beyond the
// graph smoothness reduce to quadrature against these terms.
struct PullbackMap::KernelTerms {
  struct Term {
    std::vector<int> m, n;
    double c;
  };
  int D = 1;
  double L = 1.0;
  std::vector<Term> t;

  static KernelTerms base(const std::vector<int>& nu, int D, double L) {
    KernelTerms k;
    k.D = D;
    k.L = L;
    Term t0;
    t0.m = nu;
    t0.n.assign(D, 0);
    t0.c = 1.0;
    k.t.push_back(std::move(t0));
    return k;
  }

  // R <- L * dR/dz_axis
  void d_lateral(int axis) {
    std::vector<Term> out;
    out.reserve(t.size() * 2);
    for (const Term& a : t) {
      if (a.m[axis] > 0) {
        Term b = a;
        b.c *= L * a.m[axis];
        b.m[axis] -= 1;
        out.push_back(std::move(b));
      }
      Term b = a;
      b.c *= L;
      b.n[axis] += 1;
      out.push_back(std::move(b));
    }
    t = std::move(out);
    compress();
  }

  // R <- -(D+k) R - sum_j z_j dR/dz_j   (k = kernel derivatives applied so far)
  void d_normal(int k) {
    std::vector<Term> out;
    out.reserve(t.size() * (1 + D));
    for (const Term& a : t) {
      int msum = 0;
      for (int v : a.m) msum += v;
      Term b = a;
      b.c *= -static_cast<double>(D + k + msum);
      out.push_back(std::move(b));
      for (int j = 0; j < D; ++j) {
        Term c = a;
        c.c = -a.c;
        c.m[j] += 1;
        c.n[j] += 1;
        out.push_back(std::move(c));
      }
    }
    t = std::move(out);
    compress();
  }

  void compress() {
    std::map<std::pair<std::vector<int>, std::vector<int>>, double> acc;
    for (const Term& a : t) acc[{a.m, a.n}] += a.c;
    std::vector<Term> out;
    out.reserve(acc.size());
    for (auto& [key, c] : acc) {
      if (std::abs(c) < 1e-300) continue;
      out.push_back(Term{key.first, key.second, c});
    }
    t = std::move(out);
  }

  double eval(const MollifierSpec& moll, const double* z) const {
    double total = 0.0;
    for (const Term& a : t) {
      double v = a.c;
      for (int j = 0; j < D; ++j) {
        if (a.m[j] > 0) v *= std::pow(z[j], a.m[j]);
        v *= moll.lat_axis.deriv(a.n[j], z[j]);
      }
      total += v;
    }
    return total;
  }
};

PullbackMap::PullbackMap(std::shared_ptr<const BoundaryGraph> graph, PullbackConfig cfg)
    : graph_(std::move(graph)), cfg_(cfg) {
  if (!graph_) throw validation_error("pullback: null boundary graph");
  moll_ = MollifierSpec::make(graph_->lat_dim(), cfg_.quad_order);
  lip_semi_ = boundary_seminorm(*graph_, 0, 1.0, cfg_.seminorm_samples);
  full_semi_ =
      boundary_seminorm(*graph_, graph_->smoothness(), graph_->holder(), cfg_.seminorm_samples);
  // 2*sqrt(2)*(1+Lip) guarantees the averaging window stays subdiagonal; the
  // sampled seminorm is a lower estimate, hence the headroom factor.
  L_ = lip_semi_ <= 1.0 ? 4.0 * kRoot2 : 2.0 * kRoot2 * (1.0 + lip_semi_) * 1.05;
}

double PullbackMap::lateral_integral(double window, const double* center,
                                     const std::function<double(const double*)>& f) const {
  const int D = moll_.lat_dim;
  const double w = moll_.lat_axis.halfwidth;
  const GaussRule& rule = gauss_rule(moll_.quad_order);

  if (D == 1) {
    std::vector<double> cuts = {-w, w};
    if (std::abs(window) > 1e-14) {
      for (double r : graph_->singular_radii()) {
        for (double sgn : {1.0, -1.0}) {
          double z = (center[0] - sgn * r) / window;
          if (z > -w + 1e-13 && z < w - 1e-13) cuts.push_back(z);
          if (r == 0.0) break;
        }
      }
    }
    std::sort(cuts.begin(), cuts.end());
    double acc = 0.0;
    for (size_t p = 0; p + 1 < cuts.size(); ++p) {
      double a = cuts[p], b = cuts[p + 1];
      if (b - a < 1e-15) continue;
      double mid = 0.5 * (a + b), half = 0.5 * (b - a);
      for (size_t i = 0; i < rule.x.size(); ++i) {
        double z = mid + half * rule.x[i];
        acc += half * rule.w[i] * f(&z);
      }
    }
    return acc;
  }

  // tensor rule, no panel splitting in higher lateral dimension
  std::vector<double> z(D);
  double acc = 0.0;
  std::vector<size_t> idx(D, 0);
  const size_t n = rule.x.size();
  for (;;) {
    double wt = 1.0;
    for (int j = 0; j < D; ++j) {
      z[j] = w * rule.x[idx[j]];
      wt *= w * rule.w[idx[j]];
    }
    acc += wt * f(z.data());
    int j = 0;
    for (; j < D; ++j) {
      if (++idx[j] < n) break;
      idx[j] = 0;
    }
    if (j == D) break;
  }
  return acc;
}

double PullbackMap::h2(double tau, const double* xt) const {
  if (std::abs(tau) < 1e-300) return graph_->eval(xt);
  const double window = tau / L_;
  const int D = moll_.lat_dim;
  std::vector<double> arg(D);
  return lateral_integral(window, xt, [&](const double* z) {
    for (int j = 0; j < D; ++j) arg[j] = xt[j] - window * z[j];
    return graph_->eval(arg.data()) * moll_.phi_eval(z);
  });
}

double PullbackMap::h2_dtau(double tau, const double* xt) const {
  if (graph_->smoothness() < 1)
    throw validation_error("h2_dtau: graph smoothness below 1");
  const double window = tau / L_;
  const int D = moll_.lat_dim;
  std::vector<double> arg(D);
  std::vector<int> e(D, 0);
  double acc = lateral_integral(window, xt, [&](const double* z) {
    for (int j = 0; j < D; ++j) arg[j] = xt[j] - window * z[j];
    double s = 0.0;
    for (int j = 0; j < D; ++j) {
      std::fill(e.begin(), e.end(), 0);
      e[j] = 1;
      s += graph_->deriv(e, arg.data()) * z[j];
    }
    return s * moll_.phi_eval(z);
  });
  return -acc / L_;
}

double PullbackMap::kernel_integral(const std::vector<int>& h_alpha, const KernelTerms& terms,
                                    double y1, const double* yt) const {
  const double window = y1 / L_;
  const int D = moll_.lat_dim;
  std::vector<double> arg(D);
  return lateral_integral(window, yt, [&](const double* z) {
    for (int j = 0; j < D; ++j) arg[j] = yt[j] - window * z[j];
    return graph_->deriv(h_alpha, arg.data()) * terms.eval(moll_, z);
  });
}

double PullbackMap::h2_deriv(const std::vector<int>& alpha, double y1, const double* yt) const {
  const int D = graph_->lat_dim();
  if (static_cast<int>(alpha.size()) != dim())
    throw validation_error("h2_deriv: alpha must have one entry per coordinate");
  for (int v : alpha)
    if (v < 0) throw validation_error("h2_deriv: negative derivative order");
  const int total = multi_total(alpha);
  if (total > 8) throw validation_error("h2_deriv: derivative order above 8 unsupported");
  if (!(y1 > 0.0)) throw validation_error("h2_deriv: requires y1 > 0");
  if (total == 0) return h2(y1, yt);

  // split: as many derivatives as the profile allows act on h, the rest on the
  // substituted kernel
  const int budget = std::min(graph_->smoothness(), total);
  std::vector<int> beta_lat(D, 0);
  int used = 0;
  for (int j = 0; j < D; ++j) {
    beta_lat[j] = std::min(alpha[1 + j], budget - used);
    used += beta_lat[j];
  }
  const int beta1 = std::min(alpha[0], budget - used);
  used += beta1;
  const int bar1 = alpha[0] - beta1;
  std::vector<int> bar_lat(D, 0);
  int kbar = bar1;
  for (int j = 0; j < D; ++j) {
    bar_lat[j] = alpha[1 + j] - beta_lat[j];
    kbar += bar_lat[j];
  }

  std::vector<std::vector<int>> nus;
  multi_indices_exact(D, beta1, nus);

  double acc = 0.0;
  std::vector<int> h_alpha(D);
  for (const auto& nu : nus) {
    KernelTerms kt = KernelTerms::base(nu, D, L_);
    int k = 0;
    for (int j = 0; j < D; ++j)
      for (int rep = 0; rep < bar_lat[j]; ++rep) {
        kt.d_lateral(j);
        ++k;
      }
    for (int rep = 0; rep < bar1; ++rep) {
      kt.d_normal(k);
      ++k;
    }
    for (int j = 0; j < D; ++j) h_alpha[j] = nu[j] + beta_lat[j];
    acc += multinomial(beta1, nu) * kernel_integral(h_alpha, kt, y1, yt);
  }
  return std::pow(-1.0 / L_, beta1) * std::pow(y1, -static_cast<double>(kbar)) * acc;
}

double PullbackMap::rho(const double* x, FixedPointStats* stats) const {
  const double x1 = x[0];
  const double* xt = x + 1;
  double tau = x1;
  double prev_delta = -1.0;
  FixedPointStats st;
  const double tol = cfg_.fp_tol;

  for (int it = 1; it <= cfg_.fp_max_iter; ++it) {
    double next = x1 - h2(tau, xt);
    double delta = std::abs(next - tau);
    if (prev_delta > 1e-15 && delta > 1e-18)
      st.contraction = std::max(st.contraction, delta / prev_delta);
    prev_delta = delta;
    tau = next;
    st.iterations = it;

    if (delta <= 0.25 * tol) {
      st.residual = std::abs(tau + h2(tau, xt) - x1);
      if (st.residual <= tol) {
        if (stats) *stats = st;
        return tau;
      }
    }
    if (graph_->smoothness() >= 1 && it >= 4 && delta < 1e-3) {
      for (int nit = 0; nit < 60; ++nit) {
        double e = tau + h2(tau, xt) - x1;
        st.residual = std::abs(e);
        ++st.iterations;
        if (std::abs(e) <= tol) {
          st.newton_used = true;
          if (stats) *stats = st;
          return tau;
        }
        double ep = 1.0 + h2_dtau(tau, xt);
        tau -= e / ep;
      }
      break;
    }
  }
  throw numeric_error("rho: fixed-point iteration did not reach tolerance");
}

double PullbackMap::h1(const double* x) const { return x[0] - rho(x); }

void PullbackMap::psi(const double* x, double* y) const {
  double hb = graph_->eval(x + 1);
  if (x[0] < hb - 1e-12 * std::max(1.0, std::abs(x[0])))
    throw validation_error("psi: point lies below the boundary graph");
  y[0] = rho(x);
  for (int j = 1; j < dim(); ++j) y[j] = x[j];
}

void PullbackMap::psi_inverse(const double* y, double* x) const {
  x[0] = y[0] + h2(y[0], y + 1);
  for (int j = 1; j < dim(); ++j) x[j] = y[j];
}

void PullbackMap::rho_gradient(const double* x, double* grad) const {
  const double tau = rho(x);
  const double* xt = x + 1;
  const int D = graph_->lat_dim();
  const double t1 = h2_dtau(tau, xt);
  const double et = 1.0 + t1;
  grad[0] = 1.0 / et;
  const double window = tau / L_;
  std::vector<double> arg(D);
  std::vector<int> e(D, 0);
  for (int a = 0; a < D; ++a) {
    std::fill(e.begin(), e.end(), 0);
    e[a] = 1;
    double g = lateral_integral(window, xt, [&](const double* z) {
      for (int j = 0; j < D; ++j) arg[j] = xt[j] - window * z[j];
      return graph_->deriv(e, arg.data()) * moll_.phi_eval(z);
    });
    grad[1 + a] = -g / et;
  }
}

void PullbackMap::second_partials(double tau, const double* xt, double& t1,
                                  std::vector<double>& g, double& t2, std::vector<double>& m,
                                  std::vector<double>& s) const {
  const int D = graph_->lat_dim();
  const int d = dim();
  std::vector<int> a(d, 0);

  a[0] = 1;
  t1 = h2_deriv(a, tau, xt);
  a[0] = 2;
  t2 = h2_deriv(a, tau, xt);

  g.assign(D, 0.0);
  m.assign(D, 0.0);
  s.assign(D * D, 0.0);
  for (int i = 0; i < D; ++i) {
    std::fill(a.begin(), a.end(), 0);
    a[1 + i] = 1;
    g[i] = h2_deriv(a, tau, xt);
    a[0] = 1;
    m[i] = h2_deriv(a, tau, xt);
  }
  for (int i = 0; i < D; ++i)
    for (int j = i; j < D; ++j) {
      std::fill(a.begin(), a.end(), 0);
      a[1 + i] += 1;
      a[1 + j] += 1;
      s[i * D + j] = s[j * D + i] = h2_deriv(a, tau, xt);
    }
}

void PullbackMap::hessian_at(double tau, const double* xt, double* hess) const {
  const int D = graph_->lat_dim();
  const int d = dim();
  double t1, t2;
  std::vector<double> g, m, s;
  second_partials(tau, xt, t1, g, t2, m, s);
  const double et = 1.0 + t1;
  const double et2 = et * et;
  std::vector<double> rg(d);
  rg[0] = 1.0 / et;
  for (int a = 0; a < D; ++a) rg[1 + a] = -g[a] / et;

  hess[0] = -t2 * rg[0] / et2;
  for (int a = 0; a < D; ++a) {
    double v = -(m[a] + t2 * rg[1 + a]) / et2;
    hess[0 * d + (1 + a)] = v;
    hess[(1 + a) * d + 0] = v;
  }
  for (int a = 0; a < D; ++a)
    for (int b = 0; b < D; ++b) {
      double br = (s[a * D + b] + rg[1 + b] * m[a]) * et - g[a] * (m[b] + rg[1 + b] * t2);
      hess[(1 + a) * d + (1 + b)] = -br / et2;
    }
  // quadrature noise can break exact symmetry; restore it
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      double v = 0.5 * (hess[i * d + j] + hess[j * d + i]);
      hess[i * d + j] = hess[j * d + i] = v;
    }
}

void PullbackMap::rho_hessian(const double* x, double* hess) const {
  const double tau = rho(x);
  if (tau < cfg_.hessian_floor)
    throw validation_error("rho_hessian: regularized distance below hessian floor");
  hessian_at(tau, x + 1, hess);
}

PerturbationCoefficients PullbackMap::coefficients_at(double y1, const double* yt) const {
  if (!(y1 > 0.0)) throw validation_error("coefficients_at: requires y1 > 0");
  const int d = dim();
  const int D = graph_->lat_dim();
  PerturbationCoefficients pc;
  pc.c2.assign(d, 0.0);

  std::vector<int> a(d, 0);
  a[0] = 1;
  const double t1 = h2_deriv(a, y1, yt);
  const double et = 1.0 + t1;
  pc.c2[0] = t1 / et;
  for (int j = 0; j < D; ++j) {
    std::fill(a.begin(), a.end(), 0);
    a[1 + j] = 1;
    pc.c2[1 + j] = h2_deriv(a, y1, yt) / et;
  }
  pc.c1 = 0.0;
  for (double v : pc.c2) pc.c1 += v * v;

  std::vector<double> hess(d * d);
  hessian_at(y1, yt, hess.data());
  double tr = 0.0;
  for (int i = 0; i < d; ++i) tr += hess[i * d + i];
  pc.c3 = -tr;
  return pc;
}

PullbackMap::DistanceReport PullbackMap::verify_distance_equivalence(int nsamples,
                                                                     uint64_t seed) const {
  if (graph_->lat_dim() != 1)
    throw validation_error("distance equivalence check implemented for dim 2 only");
  const double R = graph_->support_radius();

  auto distance_to_graph = [&](const double* x, double step) {
    double hx = graph_->eval(x + 1);
    double vert = x[0] - hx;
    double lo = x[1] - vert - step, hi = x[1] + vert + step;
    double best = vert, bestz = x[1];
    for (double z = lo; z <= hi; z += step) {
      double zz = z;
      double dd = std::hypot(x[0] - graph_->eval(&zz), x[1] - z);
      if (dd < best) {
        best = dd;
        bestz = z;
      }
    }
    auto d_at = [&](double z) { return std::hypot(x[0] - graph_->eval(&z), x[1] - z); };
    return golden_minimize(d_at, bestz - step, bestz + step, 40);
  };

  DistanceReport rep;
  rep.samples = nsamples;
  rep.ratio_min = 1e300;
  rep.ratio_max = -1e300;
  for (int i = 0; i < nsamples; ++i) {
    double u1 = rng::uniform(seed, rng::stream_samples, 3ull * i);
    double u2 = rng::uniform(seed, rng::stream_samples, 3ull * i + 1);
    double xt = (2.0 * u1 - 1.0) * 1.5 * R;
    double delta = std::pow(10.0, -4.0 + u2 * (std::log10(2.0) + 4.0));
    double x[2] = {graph_->eval(&xt) + delta, xt};
    double r = rho(x);
    double dist = distance_to_graph(x, R / 2000.0);
    double dist2 = distance_to_graph(x, R / 4000.0);
    if (dist <= 0.0 || dist2 <= 0.0) throw numeric_error("distance check: nonpositive distance");
    double ratio = r / dist;
    rep.ratio_min = std::min(rep.ratio_min, ratio);
    rep.ratio_max = std::max(rep.ratio_max, ratio);
    rep.max_refine_shift =
        std::max(rep.max_refine_shift, std::abs(r / dist2 - ratio) / std::abs(ratio));
  }
  return rep;
}

PullbackMap::BlowupReport PullbackMap::verify_blowup_bounds(const std::vector<int>& alpha,
                                                            int dyadic_depth, bool via_h1) const {
  if (dyadic_depth < 2) throw validation_error("blowup check: dyadic_depth must be >= 2");
  const int d = dim();
  const double R = graph_->support_radius();
  const int total = multi_total(alpha);
  if (via_h1 && (total < 1 || total > 2))
    throw validation_error("blowup check via h1: |alpha| must be 1 or 2");

  std::vector<double> lat_offsets = {0.0, 0.1 * R, -0.1 * R, 0.3 * R, -0.3 * R, 0.7 * R, -0.7 * R};
  BlowupReport rep;
  for (int mlev = 1; mlev <= dyadic_depth; ++mlev) {
    double y1 = std::pow(2.0, -mlev);
    double best = 0.0;
    for (double off : lat_offsets) {
      std::vector<double> yt(d - 1, 0.0);
      yt[0] = off;
      double v;
      if (!via_h1) {
        v = h2_deriv(alpha, y1, yt.data());
      } else {
        std::vector<double> y(d, 0.0), x(d, 0.0);
        y[0] = y1;
        for (int j = 1; j < d; ++j) y[j] = yt[j - 1];
        psi_inverse(y.data(), x.data());
        if (total == 1) {
          std::vector<double> grad(d);
          rho_gradient(x.data(), grad.data());
          int axis = 0;
          for (int j = 0; j < d; ++j)
            if (alpha[j] == 1) axis = j;
          v = (axis == 0 ? 1.0 : 0.0) - grad[axis];
        } else {
          std::vector<double> hess(d * d);
          rho_hessian(x.data(), hess.data());
          int i = -1, j = -1;
          for (int q = 0; q < d; ++q) {
            if (alpha[q] >= 1 && i < 0) i = q;
            if (alpha[q] == 2 || (alpha[q] >= 1 && q != i)) j = q;
          }
          if (j < 0) j = i;
          v = -hess[i * d + j];
        }
      }
      best = std::max(best, std::abs(v));
    }
    rep.y1.push_back(y1);
    rep.value.push_back(best);
  }

  double vmax = 0.0;
  for (double v : rep.value) vmax = std::max(vmax, v);
  if (vmax < 1e-13) {
    rep.flat = true;
    rep.slope = 0.0;
    return rep;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (size_t i = 0; i < rep.value.size(); ++i) {
    if (rep.value[i] < 1e-13 * vmax) continue;
    double lx = std::log(rep.y1[i]), ly = std::log(rep.value[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  rep.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return rep;
}

}  // namespace flatcal
