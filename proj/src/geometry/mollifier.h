#pragma once
#include "geometry/bump.h"

namespace flatcal {

// Tensor mollifier eta (normal axis) x phi (lateral axes). Each factor is a
// normalized canonical bump; the combined support sits inside the closed unit
// ball for every dimension.
struct MollifierSpec {
  int lat_dim = 1;
  int quad_order = 96;
  ScaledBump eta;       // halfwidth 1/sqrt(2)
  ScaledBump lat_axis;  // halfwidth 1/sqrt(2*max(1, lat_dim)) per axis

  static MollifierSpec make(int lat_dim, int quad_order = 96);

  double eta_eval(double t) const { return eta.eval(t); }
  double phi_eval(const double* z) const {
    double v = 1.0;
    for (int j = 0; j < lat_dim; ++j) v *= lat_axis.eval(z[j]);
    return v;
  }
};

}  // namespace flatcal
