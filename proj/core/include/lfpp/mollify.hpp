#pragma once

#include <optional>

#include "lfpp/grid.hpp"
#include "lfpp/region.hpp"

namespace lfpp {

// Truncation radius of the discrete heat kernel: max(eps log(1/eps), 6 eps).
// At the 6 eps floor the discarded mass is below e^{-18}.
double heat_truncation_radius(double eps);

// Discrete convolution with the heat kernel p_{eps^2/2}, truncated at
// heat_truncation_radius(eps) and renormalized to unit discrete mass.
// Nodes whose kernel disk leaves the window (or touches invalid input nodes)
// are marked invalid. When out_region is given, only nodes inside it are
// computed; the rest are invalid. Requires eps >= 2*spacing.
GridField heat_mollify(const GridField& f, double eps,
                       const Region* out_region = nullptr);

// Convolution with the localized mollifier Z_eps^{-1} psi_eps p_{eps^2/2},
// exact compact support radius eps log(1/eps). Same validity rules.
// Requires eps >= 2*spacing and eps < 1/e.
GridField localized_mollify(const GridField& f, double eps,
                            const Region* out_region = nullptr);

// Sum of the discrete (renormalized) kernel weights; 1 within 1e-12.
double discrete_kernel_mass(double eps, double spacing, bool localized);

}  // namespace lfpp
