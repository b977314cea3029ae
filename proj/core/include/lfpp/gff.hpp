#pragma once

#include <cstdint>
#include <optional>

#include "lfpp/grid.hpp"
#include "lfpp/region.hpp"

namespace lfpp {

// Periodic field on an m x m torus of side m*spacing; node (p,q) sits at
// (p*spacing, q*spacing) and coordinates wrap.
struct TorusField {
  int m = 0;
  double spacing = 0.0;
  std::vector<double> values;

  double side() const { return m * spacing; }
  std::size_t index(int p, int q) const {
    return static_cast<std::size_t>(q) * m + p;
  }
  double interpolate(complex z) const;  // periodic bilinear
};

// Approximate whole-plane GFF on the torus: white noise filtered in Fourier
// space with amplitude sqrt(2π)/|k| per mode (zero mode dropped), giving
// E[h(x)h(y)] = (2π/L²) Σ_{k≠0} e^{ik(x-y)}/|k|², the torus Green's function
// that matches -log|x-y| at short range. Deterministic for a given (m, seed).
TorusField sample_gff_torus(int m, double spacing, std::uint64_t seed);

// Sample on a window: spectral synthesis on an enclosing torus with side
// >= max(torus_factor * window diameter, 2.25), window cut from the torus,
// then additively normalized so the circle average of radius 1 about the
// window center is 0 (the average is taken on the torus so that it exists
// for windows too small to contain the unit circle themselves).
GridField sample_gff(const GridSpec& spec, double torus_factor, std::uint64_t seed);

// Mean of the bilinear-interpolated field over >= max(64, ceil(2πr/spacing))
// equally spaced points on the circle |w - z| = r.
double circle_average(const GridField& f, complex z, double r);
double circle_average(const TorusField& f, complex z, double r);

// eps^{γ²/2} Σ_{nodes in region} e^{γ h*_eps(node)} spacing², with h*_eps the
// heat mollification of the raw field.
double gmc_mass(const GridField& raw, double eps, double gamma, const Region& region);

// (‖f‖²_{L²} + ‖∇f‖²_{L²})^{1/2} over region nodes, central differences for
// the gradient (only where both neighbours lie in the region).
double h1_norm(const GridField& f, const Region& region);

// ℓ² norm of Fourier modes weighted by 1/|k|, zero mode excluded, normalized
// so a single complex mode A e^{ikx} has norm A * side / |k|.
double spectral_hminus1_norm(const TorusField& f);

}  // namespace lfpp
