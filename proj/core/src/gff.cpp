#include "lfpp/gff.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "lfpp/kernels.hpp"
#include "lfpp/mollify.hpp"
#include "lfpp/rng.hpp"

namespace lfpp {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;
constexpr double kTwoPi = 2.0 * kPi;

// FFTW planning is not thread-safe; execution on distinct arrays is.
std::mutex& fftw_plan_mutex() {
  static std::mutex m;
  return m;
}

int next_fast_size(int n) {
  for (;; ++n) {
    int r = n;
    for (int p : {2, 3, 5, 7})
      while (r % p == 0) r /= p;
    if (r == 1) return n;
  }
}

}  // namespace

double TorusField::interpolate(complex z) const {
  const double fx = z.real() / spacing;
  const double fy = z.imag() / spacing;
  double ix, iy;
  const double tx = std::modf(fx - std::floor(fx / m) * m, &ix);
  const double ty = std::modf(fy - std::floor(fy / m) * m, &iy);
  const int i = static_cast<int>(ix) % m;
  const int j = static_cast<int>(iy) % m;
  const int ip = (i + 1) % m;
  const int jp = (j + 1) % m;
  return (1 - tx) * (1 - ty) * values[index(i, j)] + tx * (1 - ty) * values[index(ip, j)] +
         (1 - tx) * ty * values[index(i, jp)] + tx * ty * values[index(ip, jp)];
}

TorusField sample_gff_torus(int m, double spacing, std::uint64_t seed) {
  if (m < 4) throw std::invalid_argument("sample_gff_torus: m too small");
  if (!(spacing > 0.0)) throw std::invalid_argument("sample_gff_torus: bad spacing");

  const double L = m * spacing;
  const std::size_t n = static_cast<std::size_t>(m) * m;
  const int mc = m / 2 + 1;

  std::vector<double> noise(n);
  Rng rng(seed);
  for (auto& v : noise) v = rng.normal();

  fftw_complex* spec =
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * m * mc));
  std::vector<double> out(n);

  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    fftw_plan fwd = fftw_plan_dft_r2c_2d(m, m, noise.data(), spec, FFTW_ESTIMATE);
    fftw_execute(fwd);
    fftw_destroy_plan(fwd);
  }

  // Filter: amplitude sqrt(2π) m / (L |k|) per mode; combined with the final
  // 1/m² backward normalization this yields per-mode variance 2π/(L²|k|²).
  const double amp0 = std::sqrt(kTwoPi) * m / L;
  for (int q = 0; q < m; ++q) {
    const int kq = q <= m / 2 ? q : q - m;
    const double ky = kTwoPi * kq / L;
    for (int p = 0; p < mc; ++p) {
      const double kx = kTwoPi * p / L;
      const std::size_t idx = static_cast<std::size_t>(q) * mc + p;
      if (p == 0 && kq == 0) {
        spec[idx][0] = 0.0;
        spec[idx][1] = 0.0;
        continue;
      }
      const double a = amp0 / std::hypot(kx, ky);
      spec[idx][0] *= a;
      spec[idx][1] *= a;
    }
  }

  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    fftw_plan bwd = fftw_plan_dft_c2r_2d(m, m, spec, out.data(), FFTW_ESTIMATE);
    fftw_execute(bwd);
    fftw_destroy_plan(bwd);
  }
  fftw_free(spec);

  TorusField field;
  field.m = m;
  field.spacing = spacing;
  field.values.resize(n);
  const double norm = 1.0 / (static_cast<double>(m) * m);
  for (std::size_t i = 0; i < n; ++i) field.values[i] = out[i] * norm;
  return field;
}

double circle_average(const TorusField& f, complex z, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("circle_average: r must be > 0");
  // 64x angular oversampling: trapezoid error on the piecewise-bilinear
  // interpolant falls as n^-2, and the refinement contract is 1e-6.
  const int n = std::max(64, 64 * static_cast<int>(std::ceil(kTwoPi * r / f.spacing)));
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    const double a = kTwoPi * k / n;
    sum += f.interpolate(z + r * complex(std::cos(a), std::sin(a)));
  }
  return sum / n;
}

double circle_average(const GridField& f, complex z, double r) {
  if (!(r >= 2.0 * f.spec.spacing))
    throw std::invalid_argument("circle_average: r must be >= 2*spacing");
  if (!f.spec.contains(z - complex(r, r)) || !f.spec.contains(z + complex(r, r)))
    throw std::invalid_argument("circle_average: circle exits window");
  const int n =
      std::max(64, 64 * static_cast<int>(std::ceil(kTwoPi * r / f.spec.spacing)));
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    const double a = kTwoPi * k / n;
    sum += f.interpolate(z + r * complex(std::cos(a), std::sin(a)));
  }
  return sum / n;
}

GridField sample_gff(const GridSpec& spec, double torus_factor, std::uint64_t seed) {
  spec.validate();
  if (!(torus_factor >= 2.0))
    throw std::invalid_argument("sample_gff: torus_factor must be >= 2");

  // Torus side: long-range bias control plus room for the radius-1
  // normalization circle about the window center.
  const double side_needed = std::max(torus_factor * spec.diameter(), 2.25);
  int m = next_fast_size(static_cast<int>(std::ceil(side_needed / spec.spacing)));
  if (m < std::max(spec.nx, spec.ny))
    throw std::invalid_argument("sample_gff: window larger than torus");

  TorusField torus = sample_gff_torus(m, spec.spacing, seed);

  // The window is cut from the torus node-for-node; its origin maps to torus
  // node (0,0), so the center sits at ((nx-1)/2, (ny-1)/2) * spacing.
  const complex center_local(0.5 * (spec.nx - 1) * spec.spacing,
                             0.5 * (spec.ny - 1) * spec.spacing);
  const double pin = circle_average(torus, center_local, 1.0);

  GridField field(spec);
  field.kind = FieldKind::raw_gff;
  for (int j = 0; j < spec.ny; ++j)
    for (int i = 0; i < spec.nx; ++i)
      field.values[spec.index(i, j)] = torus.values[torus.index(i % m, j % m)] - pin;

  std::ostringstream prov;
  prov << "raw-gff(seed=" << seed << ",torus=" << m << ")";
  field.provenance = prov.str();
  return field;
}

double gmc_mass(const GridField& raw, double eps, double gamma, const Region& region) {
  if (raw.kind != FieldKind::raw_gff && raw.kind != FieldKind::deterministic)
    throw std::invalid_argument("gmc_mass: field must be raw");
  const GridField mollified = heat_mollify(raw, eps);
  const double s = raw.spec.spacing;
  double sum = 0.0;
  for (int j = 0; j < mollified.spec.ny; ++j)
    for (int i = 0; i < mollified.spec.nx; ++i) {
      if (!region.contains(mollified.spec.node(i, j))) continue;
      if (!mollified.is_valid(i, j))
        throw std::invalid_argument("gmc_mass: region exits margin-safe node set");
      sum += std::exp(gamma * mollified.at(i, j));
    }
  return std::pow(eps, gamma * gamma / 2.0) * sum * s * s;
}

double h1_norm(const GridField& f, const Region& region) {
  const double s = f.spec.spacing;
  double l2 = 0.0;
  double grad2 = 0.0;
  std::size_t count = 0;
  for (int j = 0; j < f.spec.ny; ++j)
    for (int i = 0; i < f.spec.nx; ++i) {
      if (!region.contains(f.spec.node(i, j))) continue;
      ++count;
      const double v = f.at(i, j);
      l2 += v * v;
      if (i > 0 && i < f.spec.nx - 1 && region.contains(f.spec.node(i - 1, j)) &&
          region.contains(f.spec.node(i + 1, j))) {
        const double gx = (f.at(i + 1, j) - f.at(i - 1, j)) / (2.0 * s);
        grad2 += gx * gx;
      }
      if (j > 0 && j < f.spec.ny - 1 && region.contains(f.spec.node(i, j - 1)) &&
          region.contains(f.spec.node(i, j + 1))) {
        const double gy = (f.at(i, j + 1) - f.at(i, j - 1)) / (2.0 * s);
        grad2 += gy * gy;
      }
    }
  if (count == 0) throw std::invalid_argument("h1_norm: empty region");
  return std::sqrt((l2 + grad2) * s * s);
}

double spectral_hminus1_norm(const TorusField& f) {
  const int m = f.m;
  const double L = f.side();
  const int mc = m / 2 + 1;
  const std::size_t n = static_cast<std::size_t>(m) * m;

  std::vector<double> in(f.values);
  fftw_complex* spec =
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * m * mc));
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    fftw_plan fwd = fftw_plan_dft_r2c_2d(m, m, in.data(), spec, FFTW_ESTIMATE);
    fftw_execute(fwd);
    fftw_destroy_plan(fwd);
  }

  // Coefficient convention: c_k = (spacing²/L) Σ_x f(x) e^{-ikx}, so a single
  // complex mode A e^{ikx} has |c_k| = A L. Half-spectrum entries with a
  // distinct conjugate partner count twice.
  const double coef = f.spacing * f.spacing / L;
  double acc = 0.0;
  for (int q = 0; q < m; ++q) {
    const int kq = q <= m / 2 ? q : q - m;
    const double ky = kTwoPi * kq / L;
    for (int p = 0; p < mc; ++p) {
      if (p == 0 && kq == 0) continue;
      const double kx = kTwoPi * p / L;
      const double k2 = kx * kx + ky * ky;
      const std::size_t idx = static_cast<std::size_t>(q) * mc + p;
      const double c2 =
          (spec[idx][0] * spec[idx][0] + spec[idx][1] * spec[idx][1]) * coef * coef;
      // Columns 0 and m/2 already hold their conjugate partners in the
      // half-spectrum; every other stored column stands for two modes.
      const double mult = (p == 0 || 2 * p == m) ? 1.0 : 2.0;
      acc += mult * c2 / k2;
    }
  }
  fftw_free(spec);
  (void)n;
  return std::sqrt(acc);
}

}  // namespace lfpp
