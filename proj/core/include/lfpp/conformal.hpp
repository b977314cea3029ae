#pragma once

#include <memory>
#include <string>
#include <vector>

#include "lfpp/grid.hpp"
#include "lfpp/region.hpp"

namespace lfpp {

// Evaluatable holomorphic map with first/second derivatives and an inverse,
// injective on its declared domain. Immutable; share via MapPtr.
class ConformalMap {
 public:
  virtual ~ConformalMap() = default;
  virtual complex apply(complex z) const = 0;
  virtual complex derivative(complex z) const = 0;
  virtual complex second_derivative(complex z) const = 0;
  virtual complex inverse(complex w) const = 0;
  virtual const Region& domain() const = 0;
  virtual std::string kind() const = 0;
  virtual std::string describe() const = 0;
};

using MapPtr = std::shared_ptr<const ConformalMap>;

MapPtr identity_map();
// phi(z) = a z + b, a != 0.
MapPtr affine_map(complex a, complex b);
// phi(z) = (a z + b) / (c z + d), ad - bc != 0; domain must avoid the pole.
MapPtr moebius_map(complex a, complex b, complex c, complex d, Region domain);
// phi(z) = sum_n coeffs[n] (z - center)^n on the disk B_radius(center).
// Injectivity is certified at construction by a derivative-winding check plus
// boundary self-intersection sampling; throws if certification fails.
MapPtr power_series_map(complex center, double radius, std::vector<complex> coeffs);
// outer ∘ inner; requires inner(domain(inner)) ⊆ domain(outer) (sampled check).
MapPtr compose_maps(MapPtr outer, MapPtr inner);

// Λ_τ membership: true iff 1.01/τ <= |phi'| <= τ/1.01 on a dense probe grid
// of the closure of V (pitch <= probe_pitch) plus V's sampled boundary.
// Throws if V is not compactly inside U.
bool in_lambda_tau(const ConformalMap& map, const Region& V, const Region& U, double tau,
                   double probe_pitch);

// h^phi(w) = h(phi^{-1}(w)) - q log|phi'(phi^{-1}(w))| on target_spec.
// Affine maps whose inverse sends the target lattice onto source nodes are
// resampled by exact index lookup; everything else uses bilinear
// interpolation. Nodes whose preimage leaves the source window (or lands on
// invalid samples) are marked invalid.
GridField coordinate_change_field(const GridField& h, const ConformalMap& map, double q,
                                  const GridSpec& target_spec);

// Certified disk B_{r|phi'(z)|/4}(phi(z)) inside phi(B_r(z)) (Koebe 1/4),
// numerically validated against 720 boundary image samples.
Region koebe_containment(const ConformalMap& map, complex z, double r);

struct DeBrangesReport {
  std::vector<complex> coefficients;  // a_0..a_n_max of the normalized map
  double max_ratio = 0.0;             // max_{n>=2} |a_n| / n
  int argmax_n = 0;
};

// Taylor coefficients of w -> (phi(z + r w) - phi(z)) / (r phi'(z)) from
// boundary samples; reports max_n |a_n|/n (de Branges predicts <= 1).
DeBrangesReport debranges_check(const ConformalMap& map, complex z, double r, int n_max);

// Distortion-theorem interval bounding |phi'(w)/phi'(z0)| for
// |w - z0| <= s * dist(z0, ∂U): [(1-s)/(1+s)^3, (1+s)/(1-s)^3].
std::pair<double, double> distortion_interval(double s);

// Finite stand-in for Λ_τ(V,U).
struct MapFamily {
  std::vector<MapPtr> maps;
  double tau = 2.0;
  Region V = Region::everything();
  Region U = Region::everything();

  // Checks every member with in_lambda_tau; throws on failure.
  void validate(double probe_pitch) const;
  std::string describe() const;
};

// Plain-text key-value family file (one "map <kind> ..." record per line).
MapFamily read_map_family(const std::string& path);
void write_map_family(const std::string& path, const MapFamily& family);

}  // namespace lfpp
