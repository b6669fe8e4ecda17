#include "spaces/grid.h"

#include <cmath>

#include "common/csv.h"
#include "common/errors.h"
#include "geometry/pullback.h"

namespace flatcal {

HalfSpaceGrid HalfSpaceGrid::make(int dim, double x_max, int n_normal, double grading,
                                  double lat_span, int n_lateral) {
  if (dim != 1 && dim != 2) throw validation_error("grid: dim must be 1 or 2");
  if (!(x_max > 0.0)) throw validation_error("grid: x_max must be positive");
  if (n_normal < 16) throw validation_error("grid: n_normal must be >= 16");
  if (!(grading > 0.0 && grading <= 1.0)) throw validation_error("grid: grading must be in (0,1]");
  HalfSpaceGrid g;
  g.dim = dim;
  g.x_max = x_max;
  g.n_normal = n_normal;
  g.grading = grading;

  // widths A*q^(N-i), i = 1..N, smallest at the wall
  double A;
  if (std::abs(1.0 - grading) < 1e-14) {
    A = x_max / n_normal;
  } else {
    A = x_max * (1.0 - grading) / (1.0 - std::pow(grading, n_normal));
  }
  g.edges.resize(n_normal + 1);
  g.xn.resize(n_normal);
  g.wn.resize(n_normal);
  g.edges[0] = 0.0;
  for (int i = 0; i < n_normal; ++i) {
    double w = A * std::pow(grading, n_normal - 1 - i);
    g.wn[i] = w;
    g.edges[i + 1] = g.edges[i] + w;
    g.xn[i] = g.edges[i] + 0.5 * w;
  }
  g.edges[n_normal] = x_max;  // absorb rounding

  if (dim == 2) {
    if (!(lat_span > 0.0)) throw validation_error("grid: lateral span must be positive for dim 2");
    if (n_lateral < 16) throw validation_error("grid: n_lateral must be >= 16");
    if (n_lateral % 2 != 0) throw validation_error("grid: n_lateral must be even");
    g.lat_span = lat_span;
    g.n_lateral = n_lateral;
    g.wl = 2.0 * lat_span / n_lateral;
    g.xl.resize(n_lateral);
    for (int j = 0; j < n_lateral; ++j) g.xl[j] = -lat_span + (j + 0.5) * g.wl;
  } else {
    g.n_lateral = 1;
    g.wl = 1.0;
    g.xl = {0.0};
  }
  return g;
}

HalfSpaceGrid HalfSpaceGrid::refined() const {
  return make(dim, x_max, 2 * n_normal + 16, std::sqrt(grading), lat_span,
              dim == 2 ? 2 * n_lateral : 1);
}

GridFunction GridFunction::zero(const HalfSpaceGrid& g) {
  GridFunction f;
  f.grid = &g;
  f.v = Eigen::VectorXcd::Zero(g.size());
  return f;
}

GridFunction GridFunction::sample(const HalfSpaceGrid& g,
                                  const std::function<std::complex<double>(double, double)>& fn) {
  GridFunction f = zero(g);
  for (int i = 0; i < g.n_normal; ++i)
    for (int j = 0; j < g.n_lateral; ++j) f.v[g.index(i, j)] = fn(g.xn[i], g.xl[j]);
  return f;
}

GridFunction pushforward(const std::function<std::complex<double>(const double*)>& fn,
                         const PullbackMap& map, const HalfSpaceGrid& g) {
  if (map.dim() != g.dim) throw validation_error("pushforward: map and grid dimension mismatch");
  GridFunction f = GridFunction::zero(g);
  std::vector<double> y(g.dim), x(g.dim);
  for (int i = 0; i < g.n_normal; ++i)
    for (int j = 0; j < g.n_lateral; ++j) {
      y[0] = g.xn[i];
      if (g.dim == 2) y[1] = g.xl[j];
      map.psi_inverse(y.data(), x.data());
      f.v[g.index(i, j)] = fn(x.data());
    }
  return f;
}

void export_grid_function(const GridFunction& f, const std::string& path) {
  CsvWriter w;
  const HalfSpaceGrid& g = *f.grid;
  if (g.dim == 2)
    w.header = {"x1", "x2", "re", "im"};
  else
    w.header = {"x1", "re", "im"};
  for (int i = 0; i < g.n_normal; ++i)
    for (int j = 0; j < g.n_lateral; ++j) {
      std::complex<double> z = f.v[g.index(i, j)];
      if (g.dim == 2)
        w.add_row({CsvWriter::num(g.xn[i]), CsvWriter::num(g.xl[j]), CsvWriter::num(z.real()),
                   CsvWriter::num(z.imag())});
      else
        w.add_row({CsvWriter::num(g.xn[i]), CsvWriter::num(z.real()), CsvWriter::num(z.imag())});
    }
  w.write(path);
}

void export_grid_layout(const HalfSpaceGrid& g, const std::string& path) {
  CsvWriter w;
  w.header = {"axis", "index", "node", "weight"};
  for (int i = 0; i < g.n_normal; ++i)
    w.add_row({"normal", std::to_string(i), CsvWriter::num(g.xn[i]), CsvWriter::num(g.wn[i])});
  if (g.dim == 2)
    for (int j = 0; j < g.n_lateral; ++j)
      w.add_row({"lateral", std::to_string(j), CsvWriter::num(g.xl[j]), CsvWriter::num(g.wl)});
  w.write(path);
}

GridFunction import_grid_function(const HalfSpaceGrid& g, const std::string& path) {
  CsvTable t = CsvTable::read(path);
  if (t.rows.size() != g.size())
    throw validation_error("import: row count does not match grid size");
  GridFunction f = GridFunction::zero(g);
  size_t off = g.dim == 2 ? 2 : 1;
  for (size_t r = 0; r < t.rows.size(); ++r)
    f.v[r] = {std::stod(t.rows[r][off]), std::stod(t.rows[r][off + 1])};
  return f;
}

}  // namespace flatcal
