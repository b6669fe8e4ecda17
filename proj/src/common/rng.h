#pragma once
#include <cstdint>

namespace flatcal {

// Counter-based deterministic random streams. value(seed, stream, counter) is a
// pure function, so parallel consumers indexed by counter produce identical
// sequences regardless of scheduling.
namespace rng {

uint64_t mix(uint64_t z);
uint64_t value(uint64_t seed, uint64_t stream, uint64_t counter);
double uniform(uint64_t seed, uint64_t stream, uint64_t counter);   // [0,1)
double gaussian(uint64_t seed, uint64_t stream, uint64_t counter);  // N(0,1)

// Stream ids used across the library.
enum : uint64_t {
  stream_probes = 1,
  stream_seminorm = 2,
  stream_trials = 3,
  stream_samples = 4,
};

}  // namespace rng

// Additive low-discrepancy sequence in [0,1)^dim (dim <= 8); nested prefixes.
struct QuasiSequence {
  int dim;
  double alpha[8];
  explicit QuasiSequence(int d);
  void point(uint64_t n, double* out) const;
};

}  // namespace flatcal
