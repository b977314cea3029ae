#include "lfpp/distorted_kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace lfpp {

namespace {
inline double dot(complex a, complex b) {
  return a.real() * b.real() + a.imag() * b.imag();
}
}  // namespace

DistortedKernel::DistortedKernel(MapPtr map, complex z, double eps, double tau)
    : map_(std::move(map)), z_(z), eps_(eps), tau_(tau) {
  if (!map_) throw std::invalid_argument("DistortedKernel: null map");
  if (!(tau_ > 1.0)) throw std::invalid_argument("DistortedKernel: tau must be > 1");
  bump_scale_ = localized_radius(eps_);  // rejects eps outside (0, 1/e)
  phi_z_ = map_->apply(z_);
  z_eps_ = z_eps(eps_);
  support_radius_ = 4.0 * tau_ * bump_scale_;
}

double DistortedKernel::value(complex w) const {
  // The kernel lives on the map's domain U (where phi is injective); it is
  // extended by zero elsewhere. Without this, a polynomial map evaluated far
  // outside U can fold phi(w) back onto phi(z) and fake support.
  if (map_->domain().signed_distance(w) < 0.0) return 0.0;
  const complex u = map_->apply(w) - phi_z_;
  const double b = BumpProfile::value(std::abs(u) / bump_scale_);
  if (b == 0.0) return 0.0;
  const complex dphi = map_->derivative(w);
  return std::norm(dphi) / z_eps_ * b * heat_kernel(u, 0.5 * eps_ * eps_);
}

complex DistortedKernel::gradient(complex w) const {
  if (map_->domain().signed_distance(w) < 0.0) return {0.0, 0.0};
  const complex u = map_->apply(w) - phi_z_;
  const double r = std::abs(u);
  const double b = BumpProfile::value(r / bump_scale_);
  if (b == 0.0 && BumpProfile::derivative(r / bump_scale_) == 0.0) return {0.0, 0.0};
  const complex dphi = map_->derivative(w);
  const complex ddphi = map_->second_derivative(w);
  const double t = 0.5 * eps_ * eps_;
  const double p = heat_kernel(u, t);
  const complex grad_p = (-1.0 / t) * u * p;  // ∇p_t(u)
  // ∇psi_eps(u) = psi'(r/S)/S * u/r.
  complex grad_b(0.0, 0.0);
  if (r > 0.0) {
    const double db = BumpProfile::derivative(r / bump_scale_) / bump_scale_;
    grad_b = db / r * u;
  }
  const double mod2 = std::norm(dphi);
  const complex i_dphi = complex(0, 1) * dphi;

  const double gx = (2.0 * dot(dphi, ddphi) * b * p + mod2 * dot(grad_b, dphi) * p +
                     mod2 * b * dot(grad_p, dphi)) /
                    z_eps_;
  const double gy = (2.0 * dot(dphi, complex(0, 1) * ddphi) * b * p +
                     mod2 * dot(grad_b, i_dphi) * p + mod2 * b * dot(grad_p, i_dphi)) /
                    z_eps_;
  return {gx, gy};
}

DistortedKernel distorted_kernel(MapPtr map, complex z, double eps, double tau) {
  return DistortedKernel(std::move(map), z, eps, tau);
}

double pairing_pitch(double eps, double spacing) {
  return std::min(spacing, eps / 8.0);
}

namespace {

template <typename Eval>
double quadrature_sum(const DistortedKernel& kernel, double pitch, Eval&& field_value) {
  const complex z = kernel.center();
  const double radius = kernel.support_radius() + pitch;
  const int n = static_cast<int>(std::ceil(radius / pitch));
  const double r2 = radius * radius;
  double acc = 0.0;
  for (int j = -n; j <= n; ++j) {
    const double y = j * pitch;
    for (int i = -n; i <= n; ++i) {
      const double x = i * pitch;
      if (x * x + y * y > r2) continue;
      const complex w = z + complex(x, y);
      const double k = kernel.value(w);
      if (k == 0.0) continue;
      acc += k * field_value(w);
    }
  }
  return acc * pitch * pitch;
}

}  // namespace

double pair_field(const GridField& f, const DistortedKernel& kernel, double pitch) {
  return quadrature_sum(kernel, pitch, [&](complex w) {
    if (!f.spec.contains(w))
      throw std::invalid_argument("pair_field: kernel support exits field window");
    return f.interpolate(w);
  });
}

double pair_field(const GridField& f, const DistortedKernel& kernel) {
  return pair_field(f, kernel, pairing_pitch(kernel.eps(), f.spec.spacing));
}

double pair_function(const std::function<double(complex)>& f, const DistortedKernel& kernel,
                     double pitch) {
  return quadrature_sum(kernel, pitch, [&](complex w) { return f(w); });
}

double pair_function(const std::function<double(complex)>& f,
                     const DistortedKernel& kernel) {
  return pair_function(f, kernel, pairing_pitch(kernel.eps(), 1e9));
}

}  // namespace lfpp
