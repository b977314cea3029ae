#pragma once

#include <functional>

#include "lfpp/conformal.hpp"
#include "lfpp/grid.hpp"
#include "lfpp/kernels.hpp"

namespace lfpp {

// Distorted mollification kernel
//   Psi_eps^{phi,z}(w) = |phi'(w)|^2 / Z_eps * psi_eps(phi(w)-phi(z)) * p_{eps^2/2}(phi(w)-phi(z)).
// For phi in Λ_τ(V,U) and z in V it is supported on B_{4 τ eps log(1/eps)}(z).
class DistortedKernel {
 public:
  DistortedKernel(MapPtr map, complex z, double eps, double tau);

  double value(complex w) const;
  // (d/dx, d/dy) packed into a complex number.
  complex gradient(complex w) const;

  complex center() const { return z_; }
  double eps() const { return eps_; }
  double tau() const { return tau_; }
  // Certified support radius 4 τ eps log(1/eps).
  double support_radius() const { return support_radius_; }
  double normalization() const { return z_eps_; }
  const ConformalMap& map() const { return *map_; }

 private:
  MapPtr map_;
  complex z_;
  complex phi_z_;
  double eps_;
  double tau_;
  double bump_scale_;  // eps log(1/eps)
  double z_eps_;
  double support_radius_;
};

DistortedKernel distorted_kernel(MapPtr map, complex z, double eps, double tau);

// Quadrature pitch for kernel pairings: min(spacing, eps/8) guarantees at
// least 8 points per eps.
double pairing_pitch(double eps, double spacing);

// Discrete pairing sum f(w) K(w) pitch^2 over a tensor grid covering the
// kernel support, with bilinear interpolation of the field. Throws if any
// point with nonzero kernel mass falls outside the field window.
double pair_field(const GridField& f, const DistortedKernel& kernel);
double pair_field(const GridField& f, const DistortedKernel& kernel, double pitch);

// Same quadrature against an analytic integrand.
double pair_function(const std::function<double(complex)>& f, const DistortedKernel& kernel);
double pair_function(const std::function<double(complex)>& f, const DistortedKernel& kernel,
                     double pitch);

}  // namespace lfpp
