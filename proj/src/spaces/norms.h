#pragma once
#include <complex>

#include "spaces/grid.h"

namespace flatcal {

// Weighted Sobolev norm parameters: W^{k,p} with weight x1^gamma.
struct NormSpec {
  int k = 0;
  double p = 2.0;
  double gamma = 0.0;
  void validate() const;
};

// (sum_i w_i x1_i^gamma |f_i|^p)^(1/p); enforces gamma > -1
double lp_norm(const GridFunction& f, double p, double gamma);
// same quadrature without the gamma restriction (Hardy left-hand sides)
double weighted_p_norm(const GridFunction& f, double p, double gamma);

// finite-difference normal derivative (order m_normal <= 4) composed with the
// spectral periodic lateral derivative (order m_lateral <= 4)
GridFunction grid_derivative(const GridFunction& f, int m_normal, int m_lateral);

double sobolev_norm(const GridFunction& f, const NormSpec& spec);

// quadratic extrapolation to the wall x1 = 0 per lateral column
std::complex<double> trace_value(const GridFunction& f, int j_lat = 0);
std::complex<double> trace_normal(const GridFunction& f, int j_lat = 0);

struct HardyResult {
  double lhs = 0.0, rhs = 0.0, ratio = 0.0;
  int case_id = 0;  // 1: gamma < p-1 (trace-gated), 2: gamma > p-1
};
// dim-1 grids only; checks the trace gate in case 1
HardyResult hardy_check(const GridFunction& u, double p, double gamma);

struct EmbeddingResult {
  double lhs = 0.0, rhs = 0.0, ratio = 0.0;
};
// ||u||_{L^p(gamma - s p)} vs ||u||_{W^{s,p}(gamma)}
EmbeddingResult embedding_check(const GridFunction& u, const NormSpec& spec, int s);

}  // namespace flatcal
