#pragma once

#include <complex>
#include <memory>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "calculus/contour.h"
#include "calculus/sector_function.h"
#include "operators/assemble.h"
#include "spaces/norms.h"

namespace flatcal {

// real-coefficient quadrature for S^{-alpha}, alpha in (0,1); node
// factorizations are cached up to cache_limit unknowns, otherwise redone per
// call; step controls the log-substitution node spacing (coarser steps lose
// accuracy near the exponent endpoints, alpha = 1/2 tolerates 0.75)
class FractionalApplicator {
 public:
  explicit FractionalApplicator(const DiscreteOperator& A, int cache_limit = 2500,
                                double step = 0.25);

  Eigen::VectorXcd inv_power(double alpha, const Eigen::VectorXcd& v, int threads = 1) const;
  Eigen::VectorXcd power(double alpha, const Eigen::VectorXcd& v, int threads = 1) const;

  // block application; transpose applies the transposed operator
  Eigen::MatrixXcd inv_power_block(double alpha, const Eigen::MatrixXcd& v, bool transpose = false,
                                   int threads = 1) const;

  const SpMat& matrix() const { return S_; }
  bool cached() const { return cached_; }

 private:
  SpMat S_;
  std::vector<double> s_nodes_, s_weights_;
  bool cached_ = false;
  std::vector<std::unique_ptr<Eigen::SparseLU<SpMat>>> node_lu_;
  std::unique_ptr<Eigen::SparseLU<SpMat>> base_lu_;
};

// probe-based bound for max_f ||f(S)v|| / (||f||_inf ||v||) over the family
double hinfty_bound_estimate(const DiscreteOperator& A, const std::vector<SectorFunction>& family,
                             const NormSpec& spec, const ContourSpec& cspec, int nprobes,
                             uint64_t seed, int threads);

// ||S^{is}|| estimates: z^{is} z/(1+z)^2 applied by contour, composed with
// the algebraic factor S^{-1} + 2 + S
std::vector<double> imaginary_power_norms(const DiscreteOperator& A,
                                          const std::vector<double>& svals, const NormSpec& spec,
                                          int nprobes, uint64_t seed, int threads);

// norm estimate for the gradient of the inverse square root
double riesz_transform_norm(const DiscreteOperator& A, const NormSpec& spec, uint64_t seed,
                            int threads, int* iterations = nullptr);

}  // namespace flatcal
