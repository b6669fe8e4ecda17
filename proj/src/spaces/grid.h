#pragma once
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace flatcal {

class PullbackMap;

// Half-space grid: geometrically graded cells toward x1 = 0 (nodes at cell
// midpoints, quadrature weight = cell width) times a uniform periodic lateral
// axis on [-span, span) for dim 2. Node index = i_normal * n_lateral + j_lat.
struct HalfSpaceGrid {
  int dim = 1;
  double x_max = 40.0;
  double lat_span = 0.0;  // half-width of the periodic lateral box
  int n_normal = 0;
  int n_lateral = 1;
  double grading = 1.0;  // cell-width ratio toward the wall, in (0,1]

  std::vector<double> xn, wn;  // normal nodes / cell widths (ascending)
  std::vector<double> edges;   // n_normal+1 cell edges, edges[0] = 0
  std::vector<double> xl;      // lateral nodes
  double wl = 1.0;             // lateral cell width (uniform)

  static HalfSpaceGrid make(int dim, double x_max, int n_normal, double grading,
                            double lat_span = 0.0, int n_lateral = 1);
  // one dyadic refinement: (N, q) -> (2N+16, sqrt(q)), lateral count doubled
  HalfSpaceGrid refined() const;

  size_t size() const { return static_cast<size_t>(n_normal) * n_lateral; }
  size_t index(int i, int j) const { return static_cast<size_t>(i) * n_lateral + j; }
  double cell_weight(int i, int j) const {
    (void)j;
    return wn[i] * wl;
  }
};

struct GridFunction {
  const HalfSpaceGrid* grid = nullptr;
  Eigen::VectorXcd v;

  static GridFunction zero(const HalfSpaceGrid& g);
  // fn(x1, xlat); xlat = 0 for dim 1
  static GridFunction sample(const HalfSpaceGrid& g,
                             const std::function<std::complex<double>(double, double)>& fn);
};

// sample a function of domain coordinates through the inverse flattening map
GridFunction pushforward(const std::function<std::complex<double>(const double*)>& fn,
                         const PullbackMap& map, const HalfSpaceGrid& g);

void export_grid_function(const GridFunction& f, const std::string& path);
void export_grid_layout(const HalfSpaceGrid& g, const std::string& path);
GridFunction import_grid_function(const HalfSpaceGrid& g, const std::string& path);

}  // namespace flatcal
