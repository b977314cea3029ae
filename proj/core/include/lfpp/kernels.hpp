#pragma once

#include <functional>
#include <string>

#include "lfpp/grid.hpp"

namespace lfpp {

// p_t(z) = (1/2πt) exp(-|z|^2 / 2t).
double heat_kernel(complex z, double t);
double heat_kernel_radial(double r, double t);
// ∇p_t(z) = -z/t * p_t(z), as a complex number whose re/im are the x/y parts.
complex heat_kernel_grad(complex z, double t);

// Smooth radial bump: psi ≡ 1 on [0, 1/2], ≡ 0 on [1, ∞), nonincreasing and
// C^inf in between, built from the exp(-1/x) transition. The profile is pinned
// so results are reproducible; its identifier goes into report metadata.
struct BumpProfile {
  static constexpr const char* id = "smoothstep-exp-v1";
  static double value(double t);
  static double derivative(double t);
};

inline double psi(double t) { return BumpProfile::value(t); }

// Support scale of the localized mollifier.
inline double localized_radius(double eps, double log_inv_eps) {
  return eps * log_inv_eps;
}
double localized_radius(double eps);  // eps * log(1/eps), requires eps < 1/e

// psi_eps(z) = psi(|z| / (eps log eps^-1)).
double psi_eps(complex z, double eps);

// Z_eps = ∫ psi_eps(w) p_{eps^2/2}(w) dA(w), by adaptive radial quadrature
// with relative error <= 1e-10.
double z_eps(double eps);

// Adaptive Gauss-Lobatto quadrature on [a, b] (used for Z_eps and by the
// test-side oracles).
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, double abs_tol = 1e-300);

}  // namespace lfpp
