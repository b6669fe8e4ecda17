#pragma once
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "operators/assemble.h"
#include "spaces/norms.h"

namespace flatcal {

GridFunction gaussian_probe(const HalfSpaceGrid& g, uint64_t seed, uint64_t probe_id);

// smooth functions compatible with the boundary condition, indexed catalog
GridFunction trial_function(const HalfSpaceGrid& g, BcKind bc, int id);
int trial_catalog_size();

// ||lambda (lambda - S)^{-1}|| on the weighted space, S = mu - M.
// p == 2 && k == 0: weighted power iteration (sharp); otherwise the max ratio
// over 64 Gaussian probes (reported lower bound).
double resolvent_norm_estimate(const DiscreteOperator& A, std::complex<double> lambda,
                               const NormSpec& spec, uint64_t seed, int* iterations = nullptr);

struct ScanRow {
  double theta = 0.0, r = 0.0, estimate = 0.0;
  int iterations = 0;
  std::string flag;  // "clean" or "near-spectrum"
};
std::vector<ScanRow> sectoriality_scan(const DiscreteOperator& A,
                                       const std::vector<double>& thetas,
                                       const std::vector<double>& radii, const NormSpec& spec,
                                       uint64_t seed, int threads);

// max over trials of ||(full - base) u|| / ||(mu - base) u||
double perturbation_ratio(const DiscreteOperator& full, const DiscreteOperator& base, int ntrials,
                          const NormSpec& spec);

// ||(lambda - A)^{-1} f||_{W^{k+2,p}} / ||f||_{W^{k,p}}
double elliptic_regularity_ratio(const DiscreteOperator& A, std::complex<double> lambda,
                                 const GridFunction& f, const NormSpec& spec);

}  // namespace flatcal
