#pragma once
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "geometry/boundary_graph.h"
#include "geometry/mollifier.h"

namespace flatcal {

struct FixedPointStats {
  int iterations = 0;
  double contraction = 0.0;  // max observed Picard ratio
  double residual = 0.0;
  bool newton_used = false;
};

struct PullbackConfig {
  int quad_order = 96;
  double fp_tol = 1e-12;
  int fp_max_iter = 200;
  uint64_t seminorm_samples = 100000;
  double hessian_floor = 1e-8;
};

// second-order transformed-Laplacian coefficients at a flattened point
struct PerturbationCoefficients {
  double c1 = 0.0;              // |grad h1|^2 pulled back
  std::vector<double> c2;       // grad h1 pulled back (size dim)
  double c3 = 0.0;              // -Laplacian of the regularized distance
};

// Boundary-flattening map Psi(x) = (rho(x), lateral(x)) built from the
// regularized distance rho, the fixed point of tau = x1 - h2(tau, lateral).
// Immutable after construction; safe to share across threads.
class PullbackMap {
 public:
  explicit PullbackMap(std::shared_ptr<const BoundaryGraph> graph, PullbackConfig cfg = {});

  int dim() const { return graph_->dim(); }
  double scale() const { return L_; }
  double lip_seminorm() const { return lip_semi_; }
  double full_seminorm() const { return full_semi_; }
  const BoundaryGraph& graph() const { return *graph_; }
  const PullbackConfig& config() const { return cfg_; }

  // smoothed height average at offset tau (defined for every real tau)
  double h2(double tau, const double* xt) const;
  // d/dtau of h2 (needs graph smoothness >= 1)
  double h2_dtau(double tau, const double* xt) const;
  // derivative of h2 of any order; alpha = (normal, lateral...) with dim
  // entries; requires y1 > 0 once |alpha| exceeds the graph smoothness
  double h2_deriv(const std::vector<int>& alpha, double y1, const double* yt) const;

  double rho(const double* x, FixedPointStats* stats = nullptr) const;
  double h1(const double* x) const;  // x1 - rho(x)
  void psi(const double* x, double* y) const;
  void psi_inverse(const double* y, double* x) const;
  void rho_gradient(const double* x, double* grad) const;
  void rho_hessian(const double* x, double* hess) const;  // row-major dim x dim

  // flattened-coordinate coefficient evaluation (no fixed-point solve needed)
  PerturbationCoefficients coefficients_at(double y1, const double* yt) const;

  struct DistanceReport {
    double ratio_min = 0.0, ratio_max = 0.0;
    double max_refine_shift = 0.0;  // relative ratio change under lattice halving
    int samples = 0;
  };
  DistanceReport verify_distance_equivalence(int nsamples, uint64_t seed) const;

  struct BlowupReport {
    std::vector<double> y1, value;
    double slope = 0.0;  // d log(value) / d log(y1), least squares
    bool flat = false;   // all values at rounding level
  };
  BlowupReport verify_blowup_bounds(const std::vector<int>& alpha, int dyadic_depth,
                                    bool via_h1 = false) const;

 private:
  struct KernelTerms;
  double lateral_integral(double window, const double* center,
                          const std::function<double(const double*)>& f) const;
  double kernel_integral(const std::vector<int>& h_alpha, const KernelTerms& terms, double y1,
                         const double* yt) const;
  void second_partials(double tau, const double* xt, double& t1, std::vector<double>& g,
                       double& t2, std::vector<double>& m, std::vector<double>& s) const;
  void hessian_at(double tau, const double* xt, double* hess) const;

  std::shared_ptr<const BoundaryGraph> graph_;
  PullbackConfig cfg_;
  MollifierSpec moll_;
  double L_ = 0.0;
  double lip_semi_ = 0.0;
  double full_semi_ = 0.0;
};

}  // namespace flatcal
