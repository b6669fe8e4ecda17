#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace flatcal {

// holomorphic function on a sector around the positive real axis, with decay
// at 0 and infinity so that contour quadrature converges
struct SectorFunction {
  std::string label;
  std::function<std::complex<double>(std::complex<double>)> f;

  std::complex<double> operator()(std::complex<double> z) const { return f(z); }

  // sampled sup of |f| over the sector of half-angle nu
  double hinf_norm(double nu, int n_radii = 256, int n_angles = 65) const;
};

// test family with decay at both ends of the sector
std::vector<SectorFunction> rational_test_family();

// z^{is} damped at both ends; converges on the contour for delta > 0
SectorFunction mollified_imaginary_power(double s, double delta);

}  // namespace flatcal
