#include "lfpp/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace lfpp {

namespace {
constexpr double kPi = 3.14159265358979323846264338328;
constexpr double kInvE = 0.36787944117144232159552377016;
}  // namespace

double heat_kernel(complex z, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("heat_kernel: t must be > 0");
  return std::exp(-std::norm(z) / (2.0 * t)) / (2.0 * kPi * t);
}

double heat_kernel_radial(double r, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("heat_kernel: t must be > 0");
  return std::exp(-r * r / (2.0 * t)) / (2.0 * kPi * t);
}

complex heat_kernel_grad(complex z, double t) {
  return (-1.0 / t) * z * heat_kernel(z, t);
}

namespace {
// exp(-1/x) for x > 0, 0 otherwise: every derivative vanishes at 0.
inline double bump_g(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }
inline double bump_g_prime(double x) {
  return x > 0.0 ? std::exp(-1.0 / x) / (x * x) : 0.0;
}
}  // namespace

double BumpProfile::value(double t) {
  if (t <= 0.5) return 1.0;
  if (t >= 1.0) return 0.0;
  // Transition T(u) = g(u)/(g(u)+g(1-u)) rises 0→1 on [0,1]; u = 2(1-t).
  const double u = 2.0 * (1.0 - t);
  const double gu = bump_g(u);
  const double gv = bump_g(1.0 - u);
  return gu / (gu + gv);
}

double BumpProfile::derivative(double t) {
  if (t <= 0.5 || t >= 1.0) return 0.0;
  const double u = 2.0 * (1.0 - t);
  const double gu = bump_g(u);
  const double gv = bump_g(1.0 - u);
  const double gpu = bump_g_prime(u);
  const double gpv = bump_g_prime(1.0 - u);
  const double denom = (gu + gv) * (gu + gv);
  const double dT_du = (gpu * gv + gu * gpv) / denom;
  return -2.0 * dT_du;
}

double localized_radius(double eps) {
  if (!(eps > 0.0 && eps < kInvE))
    throw std::invalid_argument("localized mollifier requires eps in (0, 1/e)");
  return eps * std::log(1.0 / eps);
}

double psi_eps(complex z, double eps) {
  const double R = localized_radius(eps);
  return BumpProfile::value(std::abs(z) / R);
}

namespace {

// Adaptive Gauss-Lobatto (Gander & Gautschi style, 7-point kernel with a
// 4-point embedded rule). A branch terminates once its local error fits the
// share of the global budget proportional to its length, which is what makes
// the recursion finite on Gevrey-flat integrands like the bump edge.
struct LobattoWorker {
  const std::function<double(double)>& f;
  double tol_density = 0.0;  // allowed |error| per unit length
  int depth_limit = 40;
  long evals = 0;
  long eval_limit = 4000000;

  double rule(double a, double b, double fa, double fb, double& err) {
    const double h = 0.5 * (b - a);
    const double m = 0.5 * (a + b);
    const double alpha = std::sqrt(2.0 / 3.0);
    const double beta = 1.0 / std::sqrt(5.0);
    const double f1 = f(m - alpha * h), f2 = f(m - beta * h), f3 = f(m),
                 f4 = f(m + beta * h), f5 = f(m + alpha * h);
    evals += 5;
    const double i4 = (h / 6.0) * (fa + fb + 5.0 * (f2 + f4));
    const double i7 = (h / 1470.0) * (77.0 * (fa + fb) + 432.0 * (f1 + f5) +
                                      625.0 * (f2 + f4) + 672.0 * f3);
    err = std::abs(i7 - i4);
    return i7;
  }

  double recurse(double a, double b, double fa, double fb, int depth) {
    double err;
    const double i7 = rule(a, b, fa, fb, err);
    if (depth >= depth_limit || evals >= eval_limit || err <= tol_density * (b - a))
      return i7;
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    ++evals;
    return recurse(a, m, fa, fm, depth + 1) + recurse(m, b, fm, fb, depth + 1);
  }
};

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, double abs_tol) {
  if (!(b > a)) return 0.0;
  LobattoWorker w{f};
  // Rough magnitude from a fixed composite pass to size the error budget.
  double rough = 0.0;
  const int panels = 8;
  double prev_x = a, prev_f = f(a);
  for (int k = 1; k <= panels; ++k) {
    const double x = a + (b - a) * k / panels;
    const double fx = f(x);
    double err;
    rough += w.rule(prev_x, x, prev_f, fx, err);
    prev_x = x;
    prev_f = fx;
  }
  w.tol_density = std::max(rel_tol * std::abs(rough), abs_tol) / (b - a);
  if (!(w.tol_density > 0.0)) w.tol_density = abs_tol > 0.0 ? abs_tol : 1e-300;
  return w.recurse(a, b, f(a), f(b), 0);
}

double z_eps(double eps) {
  const double R = localized_radius(eps);  // rejects eps >= 1/e
  // Z_eps = ∫_0^R 2πr psi(r/R) p_{eps^2/2}(r) dr. Split at the plateau edge
  // R/2 where psi leaves 1, so each piece is smooth for the adaptive rule.
  const double t = 0.5 * eps * eps;
  auto integrand = [&](double r) {
    return 2.0 * kPi * r * BumpProfile::value(r / R) * heat_kernel_radial(r, t);
  };
  const double inner = integrate_adaptive(integrand, 0.0, 0.5 * R, 1e-12);
  const double outer = integrate_adaptive(integrand, 0.5 * R, R, 1e-12);
  return inner + outer;
}

}  // namespace lfpp
