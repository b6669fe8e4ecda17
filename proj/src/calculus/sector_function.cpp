#include "calculus/sector_function.h"

#include <cmath>

#include "common/errors.h"

namespace flatcal {

double SectorFunction::hinf_norm(double nu, int n_radii, int n_angles) const {
  if (!(nu > 0.0 && nu < M_PI)) throw validation_error("hinf_norm: angle must lie in (0, pi)");
  if (n_radii < 2 || n_angles < 2) throw validation_error("hinf_norm: sample counts too small");
  double best = 0.0;
  double lr0 = std::log(1e-8), lr1 = std::log(1e8);
  for (int i = 0; i < n_radii; ++i) {
    double r = std::exp(lr0 + (lr1 - lr0) * i / (n_radii - 1));
    for (int j = 0; j < n_angles; ++j) {
      double phi = -nu + 2.0 * nu * j / (n_angles - 1);
      best = std::max(best, std::abs(f(std::polar(r, phi))));
    }
  }
  return best;
}

std::vector<SectorFunction> rational_test_family() {
  using C = std::complex<double>;
  std::vector<SectorFunction> fam;
  fam.push_back({"z_over_1pz_sq", [](C z) { return z / ((1.0 + z) * (1.0 + z)); }});
  fam.push_back({"sqrtz_over_1pz", [](C z) { return std::sqrt(z) / (1.0 + z); }});
  fam.push_back({"z_over_1pz_2pz", [](C z) { return z / ((1.0 + z) * (2.0 + z)); }});
  fam.push_back({"zsq_over_1pz_4", [](C z) {
                   C w = (1.0 + z);
                   return z * z / (w * w * w * w);
                 }});
  for (double s : {1.0, -1.0, 3.0, -3.0}) {
    SectorFunction g = mollified_imaginary_power(s, 0.5);
    fam.push_back(g);
  }
  return fam;
}

SectorFunction mollified_imaginary_power(double s, double delta) {
  if (!(delta > 0.0 && delta <= 1.0))
    throw validation_error("mollified power: delta must lie in (0, 1]");
  using C = std::complex<double>;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "zpow_i%g_d%g", s, delta);
  return {buf, [s, delta](C z) {
            C lz = std::log(z);
            C damp = std::exp(delta * (lz - std::log(1.0 + z)) - delta * std::log(1.0 + z));
            return std::exp(C(0.0, s) * lz) * damp;
          }};
}

}  // namespace flatcal
