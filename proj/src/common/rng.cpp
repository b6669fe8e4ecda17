#include "common/rng.h"

#include <cmath>

namespace flatcal {
namespace rng {

uint64_t mix(uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

uint64_t value(uint64_t seed, uint64_t stream, uint64_t counter) {
  return mix(mix(seed ^ mix(stream)) + counter);
}

double uniform(uint64_t seed, uint64_t stream, uint64_t counter) {
  return static_cast<double>(value(seed, stream, counter) >> 11) * 0x1.0p-53;
}

double gaussian(uint64_t seed, uint64_t stream, uint64_t counter) {
  // Box-Muller on two sub-draws of the same counter.
  double u1 = uniform(seed, stream ^ 0x5151515151515151ull, counter);
  double u2 = uniform(seed, stream ^ 0xa3a3a3a3a3a3a3a3ull, counter);
  if (u1 < 1e-300) u1 = 1e-300;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace rng

QuasiSequence::QuasiSequence(int d) : dim(d) {
  // generalized golden ratio: x^(d+1) = x + 1
  double phi = 1.5;
  for (int it = 0; it < 64; ++it) phi = std::pow(1.0 + phi, 1.0 / (d + 1));
  double a = 1.0;
  for (int j = 0; j < dim && j < 8; ++j) {
    a /= phi;
    alpha[j] = a;
  }
}

void QuasiSequence::point(uint64_t n, double* out) const {
  for (int j = 0; j < dim; ++j) {
    double v = 0.5 + alpha[j] * static_cast<double>(n + 1);
    out[j] = v - std::floor(v);
  }
}

}  // namespace flatcal
