#include "operators/assemble.h"

#include <algorithm>
#include <vector>

#include "common/csv.h"
#include "common/errors.h"
#include "common/parallel.h"

namespace flatcal {

BcKind bc_from_string(const std::string& s) {
  if (s == "dirichlet") return BcKind::dirichlet;
  if (s == "neumann") return BcKind::neumann;
  throw validation_error("unknown boundary condition: " + s);
}

SpMatC DiscreteOperator::positive() const {
  SpMatC out = (-M).cast<std::complex<double>>();
  SpMatC ident(M.rows(), M.cols());
  ident.setIdentity();
  out += std::complex<double>(mu, 0.0) * ident;
  return out;
}

namespace {

using Trip = Eigen::Triplet<double>;

void add_normal_laplacian(const HalfSpaceGrid& g, BcKind bc, std::vector<Trip>& t) {
  const int N = g.n_normal, M = g.n_lateral;
  for (int i = 0; i < N; ++i) {
    double inv_w = 1.0 / g.wn[i];
    // upward flux
    double hp = i + 1 < N ? g.xn[i + 1] - g.xn[i] : g.x_max - g.xn[i];
    // downward flux
    double hm = i > 0 ? g.xn[i] - g.xn[i - 1] : g.xn[0];
    for (int j = 0; j < M; ++j) {
      int row = static_cast<int>(g.index(i, j));
      double diag = 0.0;
      if (i + 1 < N) {
        t.emplace_back(row, g.index(i + 1, j), inv_w / hp);
        diag -= inv_w / hp;
      } else {
        diag -= inv_w / hp;  // far wall value 0
      }
      if (i > 0) {
        t.emplace_back(row, g.index(i - 1, j), inv_w / hm);
        diag -= inv_w / hm;
      } else if (bc == BcKind::dirichlet) {
        diag -= inv_w / hm;  // wall value 0 at distance xn[0]
      }
      t.emplace_back(row, row, diag);
    }
  }
}

void add_lateral_laplacian(const HalfSpaceGrid& g, std::vector<Trip>& t) {
  if (g.dim != 2) return;
  const int N = g.n_normal, M = g.n_lateral;
  double c = 1.0 / (g.wl * g.wl);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < M; ++j) {
      int row = static_cast<int>(g.index(i, j));
      t.emplace_back(row, g.index(i, (j + 1) % M), c);
      t.emplace_back(row, g.index(i, (j + M - 1) % M), c);
      t.emplace_back(row, row, -2.0 * c);
    }
}

}  // namespace

DiscreteOperator assemble_laplacian(const HalfSpaceGrid& g, BcKind bc, double mu) {
  DiscreteOperator op;
  op.grid = &g;
  op.bc = bc;
  op.mu = mu;
  op.label = "laplacian";
  std::vector<Trip> t;
  t.reserve(g.size() * 5);
  add_normal_laplacian(g, bc, t);
  add_lateral_laplacian(g, t);
  op.M.resize(g.size(), g.size());
  op.M.setFromTriplets(t.begin(), t.end());
  return op;
}

SpMat d1_matrix(const HalfSpaceGrid& g, BcKind bc) {
  const int N = g.n_normal, M = g.n_lateral;
  std::vector<Trip> t;
  t.reserve(g.size() * 3);
  // derivative at point e of the quadratic through nodes (p, q, r)
  auto lag = [](double p, double q, double r, double e, double& cp, double& cq, double& cr) {
    cp = (2 * e - q - r) / ((p - q) * (p - r));
    cq = (2 * e - p - r) / ((q - p) * (q - r));
    cr = (2 * e - p - q) / ((r - p) * (r - q));
  };
  for (int j = 0; j < M; ++j) {
    {
      double cp, cq, cr;
      if (bc == BcKind::dirichlet) {
        lag(0.0, g.xn[0], g.xn[1], g.xn[0], cp, cq, cr);  // wall value 0 dropped
        t.emplace_back(g.index(0, j), g.index(0, j), cq);
        t.emplace_back(g.index(0, j), g.index(1, j), cr);
      } else {
        lag(g.xn[0], g.xn[1], g.xn[2], g.xn[0], cp, cq, cr);
        t.emplace_back(g.index(0, j), g.index(0, j), cp);
        t.emplace_back(g.index(0, j), g.index(1, j), cq);
        t.emplace_back(g.index(0, j), g.index(2, j), cr);
      }
    }
    for (int i = 1; i + 1 < N; ++i) {
      double cp, cq, cr;
      lag(g.xn[i - 1], g.xn[i], g.xn[i + 1], g.xn[i], cp, cq, cr);
      t.emplace_back(g.index(i, j), g.index(i - 1, j), cp);
      t.emplace_back(g.index(i, j), g.index(i, j), cq);
      t.emplace_back(g.index(i, j), g.index(i + 1, j), cr);
    }
    {
      double cp, cq, cr;
      lag(g.xn[N - 2], g.xn[N - 1], g.x_max, g.xn[N - 1], cp, cq, cr);  // far wall value 0
      t.emplace_back(g.index(N - 1, j), g.index(N - 2, j), cp);
      t.emplace_back(g.index(N - 1, j), g.index(N - 1, j), cq);
    }
  }
  SpMat out(g.size(), g.size());
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

SpMat d11_matrix(const HalfSpaceGrid& g, BcKind bc) {
  const int N = g.n_normal, M = g.n_lateral;
  std::vector<Trip> t;
  t.reserve(g.size() * 3);
  auto lag2 = [](double p, double q, double r, double& cp, double& cq, double& cr) {
    cp = 2.0 / ((p - q) * (p - r));
    cq = 2.0 / ((q - p) * (q - r));
    cr = 2.0 / ((r - p) * (r - q));
  };
  for (int j = 0; j < M; ++j) {
    {
      double cp, cq, cr;
      if (bc == BcKind::dirichlet) {
        lag2(0.0, g.xn[0], g.xn[1], cp, cq, cr);
        t.emplace_back(g.index(0, j), g.index(0, j), cq);
        t.emplace_back(g.index(0, j), g.index(1, j), cr);
      } else {
        // even quadratic fit honoring zero wall slope
        double a = g.xn[0], b = g.xn[1];
        double c = 2.0 / (b * b - a * a);
        t.emplace_back(g.index(0, j), g.index(0, j), -c);
        t.emplace_back(g.index(0, j), g.index(1, j), c);
      }
    }
    for (int i = 1; i + 1 < N; ++i) {
      double cp, cq, cr;
      lag2(g.xn[i - 1], g.xn[i], g.xn[i + 1], cp, cq, cr);
      t.emplace_back(g.index(i, j), g.index(i - 1, j), cp);
      t.emplace_back(g.index(i, j), g.index(i, j), cq);
      t.emplace_back(g.index(i, j), g.index(i + 1, j), cr);
    }
    {
      double cp, cq, cr;
      lag2(g.xn[N - 2], g.xn[N - 1], g.x_max, cp, cq, cr);
      t.emplace_back(g.index(N - 1, j), g.index(N - 2, j), cp);
      t.emplace_back(g.index(N - 1, j), g.index(N - 1, j), cq);
    }
  }
  SpMat out(g.size(), g.size());
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

SpMat dlat_matrix(const HalfSpaceGrid& g) {
  if (g.dim != 2) throw validation_error("dlat: dim-2 grids only");
  const int N = g.n_normal, M = g.n_lateral;
  std::vector<Trip> t;
  t.reserve(g.size() * 2);
  double c = 1.0 / (2.0 * g.wl);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < M; ++j) {
      t.emplace_back(g.index(i, j), g.index(i, (j + 1) % M), c);
      t.emplace_back(g.index(i, j), g.index(i, (j + M - 1) % M), -c);
    }
  SpMat out(g.size(), g.size());
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

DiscreteOperator assemble_pullback_laplacian(const HalfSpaceGrid& g, const PullbackMap& map,
                                             BcKind bc, double mu, int threads) {
  DiscreteOperator op = assemble_laplacian(g, bc, mu);
  op.label = "pullback_laplacian";
  if (map.graph().kind() == "zero") return op;  // perturbation vanishes identically
  if (g.dim != 2 || map.dim() != 2)
    throw validation_error("pullback assembly: nonflat boundaries need dim-2 grids");

  const size_t n = g.size();
  Eigen::VectorXd a11(n), alat(n), a1(n);
  parallel_for(n, threads, [&](size_t idx) {
    int i = static_cast<int>(idx) / g.n_lateral;
    int j = static_cast<int>(idx) % g.n_lateral;
    double yt = g.xl[j];
    PerturbationCoefficients pc = map.coefficients_at(g.xn[i], &yt);
    a11[idx] = pc.c1 - 2.0 * pc.c2[0];
    alat[idx] = -2.0 * pc.c2[1];
    a1[idx] = -pc.c3;
  });

  SpMat d1 = d1_matrix(g, bc);
  SpMat d11 = d11_matrix(g, bc);
  SpMat cross = (dlat_matrix(g) * d1).pruned();
  SpMat pert = SpMat(a11.asDiagonal()) * d11;
  pert += SpMat(alat.asDiagonal()) * cross;
  pert += SpMat(a1.asDiagonal()) * d1;
  op.M += pert;
  op.M.makeCompressed();
  return op;
}

void export_operator(const DiscreteOperator& A, const std::string& path) {
  struct Entry {
    int r, c;
    double v;
  };
  std::vector<Entry> entries;
  entries.reserve(A.M.nonZeros());
  for (int k = 0; k < A.M.outerSize(); ++k)
    for (SpMat::InnerIterator it(A.M, k); it; ++it)
      entries.push_back({static_cast<int>(it.row()), static_cast<int>(it.col()), it.value()});
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.r != b.r ? a.r < b.r : a.c < b.c;
  });
  CsvWriter w;
  w.header = {"row", "col", "re", "im"};
  for (const Entry& e : entries)
    w.add_row({std::to_string(e.r), std::to_string(e.c), CsvWriter::num(e.v), "0"});
  w.write(path);
}

}  // namespace flatcal
