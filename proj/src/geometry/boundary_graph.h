#pragma once
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace flatcal {

// Lipschitz graph over R^(dim-1) describing the rough boundary. Profiles are
// compactly supported; the flat exterior continues as h = 0.
class BoundaryGraph {
 public:
  virtual ~BoundaryGraph() = default;

  int dim() const { return dim_; }
  int lat_dim() const { return dim_ - 1; }
  int smoothness() const { return smoothness_; }    // ell
  double holder() const { return holder_; }         // lambda in (0,1]
  double support_radius() const { return radius_; }
  const std::string& kind() const { return kind_; }

  virtual double eval(const double* xt) const = 0;
  // |alpha| <= smoothness(); alpha has lat_dim entries
  virtual double deriv(const std::vector<int>& alpha, const double* xt) const = 0;
  // radii where the profile loses smoothness (quadrature panel splits)
  virtual std::vector<double> singular_radii() const = 0;

 protected:
  BoundaryGraph(int dim, int ell, double lambda, double radius, std::string kind);
  int dim_;
  int smoothness_;
  double holder_;
  double radius_;
  std::string kind_;
};

// kinds: "zero", "bump" (C^{1,1} profile eps*(1-(r/R)^2)^2_+),
// "cone_smoothed" (C^{1,lambda} profile eps*r^{1+lambda}*cutoff(r/R))
std::shared_ptr<const BoundaryGraph> make_boundary(const std::string& kind, double eps,
                                                   double lambda, double radius, int dim);

// Holder-seminorm estimate: max of sup|d^a h| over |a| <= ell plus the sampled
// lambda-Holder quotient of the order-ell derivatives. Low-discrepancy point
// pairs; nested in sample_count.
double boundary_seminorm(const BoundaryGraph& g, int ell, double lambda, uint64_t sample_count);

}  // namespace flatcal
