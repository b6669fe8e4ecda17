#include "spaces/norms.h"

#include <cmath>

#include "common/errors.h"

namespace flatcal {

void NormSpec::validate() const {
  if (k < 0 || k > 4) throw validation_error("norm spec: k must lie in 0..4");
  if (!(p > 1.0) || p > 1e6) throw validation_error("norm spec: p must lie in (1, inf)");
  if (!(gamma > -1.0)) throw validation_error("norm spec: gamma must exceed -1");
  for (int j = 1; j <= k + 3; ++j)
    if (std::abs(gamma - (j * p - 1.0)) < 1e-9)
      throw validation_error("norm spec: gamma resonates with j*p-1");
}

double weighted_p_norm(const GridFunction& f, double p, double gamma) {
  if (!(p > 1.0)) throw validation_error("norm: p must exceed 1");
  const HalfSpaceGrid& g = *f.grid;
  double acc = 0.0;
  for (int i = 0; i < g.n_normal; ++i) {
    double wq = g.wn[i] * std::pow(g.xn[i], gamma) * g.wl;
    for (int j = 0; j < g.n_lateral; ++j) acc += wq * std::pow(std::abs(f.v[g.index(i, j)]), p);
  }
  return std::pow(acc, 1.0 / p);
}

double lp_norm(const GridFunction& f, double p, double gamma) {
  if (!(gamma > -1.0)) throw validation_error("lp_norm: gamma must exceed -1");
  return weighted_p_norm(f, p, gamma);
}

namespace {

// nonuniform 3-point first derivative on a column
void normal_d1(const HalfSpaceGrid& g, const Eigen::VectorXcd& in, Eigen::VectorXcd& out,
               int lat) {
  const int n = g.n_normal;
  auto at = [&](int i) { return in[g.index(i, lat)]; };
  auto put = [&](int i, std::complex<double> v) { out[g.index(i, lat)] = v; };
  {
    double h1 = g.xn[1] - g.xn[0], h2 = g.xn[2] - g.xn[1];
    put(0, -(2 * h1 + h2) / (h1 * (h1 + h2)) * at(0) + (h1 + h2) / (h1 * h2) * at(1) -
               h1 / (h2 * (h1 + h2)) * at(2));
  }
  for (int i = 1; i + 1 < n; ++i) {
    double hm = g.xn[i] - g.xn[i - 1], hp = g.xn[i + 1] - g.xn[i];
    put(i, -hp / (hm * (hm + hp)) * at(i - 1) + (hp - hm) / (hm * hp) * at(i) +
               hm / (hp * (hm + hp)) * at(i + 1));
  }
  {
    double a = g.xn[n - 2] - g.xn[n - 3], b = g.xn[n - 1] - g.xn[n - 2];
    put(n - 1, b / (a * (a + b)) * at(n - 3) - (a + b) / (a * b) * at(n - 2) +
                   (a + 2 * b) / (b * (a + b)) * at(n - 1));
  }
}

// second derivative of the quadratic through three nodes
void normal_d2(const HalfSpaceGrid& g, const Eigen::VectorXcd& in, Eigen::VectorXcd& out,
               int lat) {
  const int n = g.n_normal;
  auto at = [&](int i) { return in[g.index(i, lat)]; };
  auto triple = [&](int p, int q, int r) {
    double xp = g.xn[p], xq = g.xn[q], xr = g.xn[r];
    return 2.0 * (at(p) / ((xp - xq) * (xp - xr)) + at(q) / ((xq - xp) * (xq - xr)) +
                  at(r) / ((xr - xp) * (xr - xq)));
  };
  out[g.index(0, lat)] = triple(0, 1, 2);
  for (int i = 1; i + 1 < n; ++i) out[g.index(i, lat)] = triple(i - 1, i, i + 1);
  out[g.index(n - 1, lat)] = triple(n - 3, n - 2, n - 1);
}

GridFunction apply_normal(const GridFunction& f, int order) {
  GridFunction out = GridFunction::zero(*f.grid);
  for (int j = 0; j < f.grid->n_lateral; ++j) {
    if (order == 1)
      normal_d1(*f.grid, f.v, out.v, j);
    else
      normal_d2(*f.grid, f.v, out.v, j);
  }
  return out;
}

// periodic trigonometric differentiation matrices, even node count
Eigen::MatrixXd spectral_matrix(const HalfSpaceGrid& g, int order) {
  const int M = g.n_lateral;
  const double scale = M_PI / g.lat_span;
  Eigen::MatrixXd D(M, M);
  for (int j = 0; j < M; ++j)
    for (int k = 0; k < M; ++k) {
      if (j == k) {
        D(j, k) = order == 1 ? 0.0 : scale * scale * (-M * M / 12.0 - 1.0 / 6.0);
        continue;
      }
      int diff = j - k;
      double sgn = (diff % 2 == 0) ? 1.0 : -1.0;
      double ang = diff * M_PI / M;
      if (order == 1)
        D(j, k) = scale * 0.5 * sgn / std::tan(ang);
      else
        D(j, k) = -scale * scale * sgn / (2.0 * std::sin(ang) * std::sin(ang));
    }
  return D;
}

GridFunction apply_lateral(const GridFunction& f, int order) {
  const HalfSpaceGrid& g = *f.grid;
  Eigen::MatrixXd D = spectral_matrix(g, order);
  GridFunction out = GridFunction::zero(g);
  Eigen::VectorXcd row(g.n_lateral);
  for (int i = 0; i < g.n_normal; ++i) {
    for (int j = 0; j < g.n_lateral; ++j) row[j] = f.v[g.index(i, j)];
    Eigen::VectorXcd dr = D * row;
    for (int j = 0; j < g.n_lateral; ++j) out.v[g.index(i, j)] = dr[j];
  }
  return out;
}

}  // namespace

GridFunction grid_derivative(const GridFunction& f, int m_normal, int m_lateral) {
  if (m_normal < 0 || m_normal > 4 || m_lateral < 0 || m_lateral > 4)
    throw validation_error("derivative order must lie in 0..4");
  if (m_lateral > 0 && f.grid->dim != 2)
    throw validation_error("lateral derivative requires a dim-2 grid");
  if (f.grid->n_normal < m_normal + 3)
    throw validation_error("derivative: grid too coarse for requested order");
  GridFunction cur = f;
  int rem = m_normal;
  while (rem >= 2) {
    cur = apply_normal(cur, 2);
    rem -= 2;
  }
  if (rem == 1) cur = apply_normal(cur, 1);
  rem = m_lateral;
  while (rem >= 2) {
    cur = apply_lateral(cur, 2);
    rem -= 2;
  }
  if (rem == 1) cur = apply_lateral(cur, 1);
  return cur;
}

double sobolev_norm(const GridFunction& f, const NormSpec& spec) {
  spec.validate();
  if (f.grid->dim == 1) {
    double acc = 0.0;
    for (int m = 0; m <= spec.k; ++m) {
      double nm = weighted_p_norm(grid_derivative(f, m, 0), spec.p, spec.gamma);
      acc += std::pow(nm, spec.p);
    }
    return std::pow(acc, 1.0 / spec.p);
  }
  double acc = 0.0;
  for (int mn = 0; mn <= spec.k; ++mn)
    for (int ml = 0; mn + ml <= spec.k; ++ml) {
      double nm = weighted_p_norm(grid_derivative(f, mn, ml), spec.p, spec.gamma);
      acc += std::pow(nm, spec.p);
    }
  return std::pow(acc, 1.0 / spec.p);
}

std::complex<double> trace_value(const GridFunction& f, int j_lat) {
  const HalfSpaceGrid& g = *f.grid;
  double a = g.xn[0], b = g.xn[1], c = g.xn[2];
  double la = b * c / ((a - b) * (a - c));
  double lb = a * c / ((b - a) * (b - c));
  double lc = a * b / ((c - a) * (c - b));
  return la * f.v[g.index(0, j_lat)] + lb * f.v[g.index(1, j_lat)] + lc * f.v[g.index(2, j_lat)];
}

std::complex<double> trace_normal(const GridFunction& f, int j_lat) {
  const HalfSpaceGrid& g = *f.grid;
  double a = g.xn[0], b = g.xn[1], c = g.xn[2];
  double la = -(b + c) / ((a - b) * (a - c));
  double lb = -(a + c) / ((b - a) * (b - c));
  double lc = -(a + b) / ((c - a) * (c - b));
  return la * f.v[g.index(0, j_lat)] + lb * f.v[g.index(1, j_lat)] + lc * f.v[g.index(2, j_lat)];
}

HardyResult hardy_check(const GridFunction& u, double p, double gamma) {
  if (u.grid->dim != 1) throw validation_error("hardy_check: dim-1 grids only");
  if (!(p > 1.0) || p > 1e6) throw validation_error("hardy_check: p must lie in (1, inf)");
  if (!(gamma > -1.0)) throw validation_error("hardy_check: gamma must exceed -1");
  if (std::abs(gamma - (p - 1.0)) < 1e-12)
    throw validation_error("hardy_check: gamma equals p-1 (excluded)");
  HardyResult r;
  r.case_id = gamma < p - 1.0 ? 1 : 2;
  if (r.case_id == 1) {
    double scale = weighted_p_norm(u, p, gamma);
    if (std::abs(trace_value(u)) > 1e-6 * std::max(scale, 1e-300))
      throw validation_error("hardy_check: case 1 requires vanishing trace");
  }
  r.lhs = weighted_p_norm(u, p, gamma - p);
  r.rhs = weighted_p_norm(grid_derivative(u, 1, 0), p, gamma);
  r.ratio = r.rhs > 0.0 ? r.lhs / r.rhs : 0.0;
  return r;
}

EmbeddingResult embedding_check(const GridFunction& u, const NormSpec& spec, int s) {
  spec.validate();
  if (s < 0 || s > spec.k) throw validation_error("embedding_check: s must lie in 0..k");
  double gl = spec.gamma - s * spec.p;
  if (!(gl > -1.0))
    throw validation_error("embedding_check: gamma - s*p must exceed -1");
  EmbeddingResult r;
  r.lhs = weighted_p_norm(u, spec.p, gl);
  NormSpec low{s, spec.p, spec.gamma};
  r.rhs = sobolev_norm(u, low);
  r.ratio = r.rhs > 0.0 ? r.lhs / r.rhs : 0.0;
  return r;
}

}  // namespace flatcal
