#include "geometry/mollifier.h"

#include <algorithm>
#include <cmath>

#include "common/errors.h"

namespace flatcal {

MollifierSpec MollifierSpec::make(int lat_dim, int quad_order) {
  if (lat_dim < 1) throw validation_error("mollifier: lat_dim must be >= 1");
  if (quad_order < 8) throw validation_error("mollifier: quadrature order must be >= 8");
  MollifierSpec m;
  m.lat_dim = lat_dim;
  m.quad_order = quad_order;
  m.eta = ScaledBump::make(1.0 / std::sqrt(2.0));
  m.lat_axis = ScaledBump::make(1.0 / std::sqrt(2.0 * std::max(1, lat_dim)));
  return m;
}

}  // namespace flatcal
