#include "lfpp/mollify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "lfpp/kernels.hpp"

namespace lfpp {

double heat_truncation_radius(double eps) {
  return std::max(eps * std::log(1.0 / eps), 6.0 * eps);
}

namespace {

// One row of kernel offsets: dy fixed, dx in [-half_width, half_width].
struct KernelRow {
  int dy;
  int half_width;
  std::vector<double> weights;  // indexed by dx + half_width
};

struct DiscreteKernel {
  int radius_nodes;
  std::vector<KernelRow> rows;  // dy from -radius..radius
  double center_weight;

  const KernelRow& row(int dy) const { return rows[dy + radius_nodes]; }
};

// Samples the radial kernel on the lattice inside the truncation disk and
// renormalizes to unit mass.
template <typename F>
DiscreteKernel build_kernel(double radius, double spacing, F&& kernel_value) {
  DiscreteKernel k;
  k.radius_nodes = static_cast<int>(std::floor(radius / spacing));
  const double r2 = radius * radius;
  double total = 0.0;
  k.rows.resize(2 * k.radius_nodes + 1);
  for (int dy = -k.radius_nodes; dy <= k.radius_nodes; ++dy) {
    KernelRow row;
    row.dy = dy;
    const double y = dy * spacing;
    const double max_x2 = r2 - y * y;
    row.half_width = max_x2 >= 0.0
                         ? static_cast<int>(std::floor(std::sqrt(max_x2) / spacing))
                         : -1;
    if (row.half_width >= 0) {
      row.weights.resize(2 * row.half_width + 1);
      for (int dx = -row.half_width; dx <= row.half_width; ++dx) {
        const double w = kernel_value(std::hypot(dx * spacing, y));
        row.weights[dx + row.half_width] = w;
        total += w;
      }
    }
    k.rows[dy + k.radius_nodes] = std::move(row);
  }
  if (!(total > 0.0)) throw std::runtime_error("mollify: degenerate kernel");
  for (auto& row : k.rows)
    for (auto& w : row.weights) w /= total;
  k.center_weight = k.row(0).weights[k.row(0).half_width];
  return k;
}

// Direct convolution. The accumulation pairs each offset with its point
// reflection and adds the two samples first, which keeps mollification of a
// centrally symmetric field centrally symmetric bit-for-bit.
GridField convolve(const GridField& f, const DiscreteKernel& k, FieldKind out_kind,
                   double eps, const char* tag, const Region* out_region) {
  const GridSpec& spec = f.spec;
  const int nx = spec.nx;
  const int ny = spec.ny;
  const int R = k.radius_nodes;

  GridField out(spec);
  out.kind = out_kind;
  out.kind_param = eps;
  out.provenance = f.provenance + "|" + tag;
  out.valid.assign(spec.size(), 0);

  const double* in = f.values.data();
  const std::uint8_t* in_valid = f.valid.empty() ? nullptr : f.valid.data();

#pragma omp parallel for schedule(dynamic, 8)
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      if (out_region && !out_region->contains(spec.node(i, j))) continue;
      if (i < R || j < R || i >= nx - R || j >= ny - R) continue;
      if (in_valid) {
        bool ok = true;
        for (int dy = -R; dy <= R && ok; ++dy) {
          const KernelRow& row = k.row(dy);
          const std::uint8_t* v = in_valid + static_cast<std::size_t>(j + dy) * nx + i;
          for (int dx = -row.half_width; dx <= row.half_width; ++dx)
            if (!v[dx]) {
              ok = false;
              break;
            }
        }
        if (!ok) continue;
      }

      double acc = k.center_weight * in[static_cast<std::size_t>(j) * nx + i];
      {
        const KernelRow& row0 = k.row(0);
        const double* c = in + static_cast<std::size_t>(j) * nx + i;
        const double* w = row0.weights.data() + row0.half_width;
        for (int dx = 1; dx <= row0.half_width; ++dx)
          acc += w[dx] * (c[dx] + c[-dx]);
      }
      for (int dy = 1; dy <= R; ++dy) {
        const KernelRow& row = k.row(dy);
        if (row.half_width < 0) continue;
        const double* up = in + static_cast<std::size_t>(j + dy) * nx + i;
        const double* dn = in + static_cast<std::size_t>(j - dy) * nx + i;
        const double* w = row.weights.data() + row.half_width;
        double s = 0.0;
        for (int dx = -row.half_width; dx <= row.half_width; ++dx)
          s += w[dx] * (up[dx] + dn[-dx]);
        acc += s;
      }
      out.values[spec.index(i, j)] = acc;
      out.valid[spec.index(i, j)] = 1;
    }
  }
  return out;
}

void check_mollify_pre(const GridField& f, double eps) {
  if (f.kind == FieldKind::heat_mollified || f.kind == FieldKind::localized_mollified)
    throw std::invalid_argument("mollify: input already mollified");
  if (!(eps >= 2.0 * f.spec.spacing))
    throw std::invalid_argument("mollify: eps too small for the grid (need eps >= 2*spacing)");
}

}  // namespace

GridField heat_mollify(const GridField& f, double eps, const Region* out_region) {
  check_mollify_pre(f, eps);
  const double radius = heat_truncation_radius(eps);
  if (2.0 * radius >= std::min(f.spec.width(), f.spec.height()))
    throw std::invalid_argument("heat_mollify: insufficient margin for kernel support");
  const double t = 0.5 * eps * eps;
  auto k = build_kernel(radius, f.spec.spacing,
                        [&](double r) { return heat_kernel_radial(r, t); });
  std::ostringstream tag;
  tag << "heat-mollified(eps=" << eps << ")";
  return convolve(f, k, FieldKind::heat_mollified, eps, tag.str().c_str(), out_region);
}

GridField localized_mollify(const GridField& f, double eps, const Region* out_region) {
  check_mollify_pre(f, eps);
  const double radius = localized_radius(eps);  // rejects eps >= 1/e
  if (2.0 * radius >= std::min(f.spec.width(), f.spec.height()))
    throw std::invalid_argument("localized_mollify: insufficient margin for kernel support");
  const double t = 0.5 * eps * eps;
  auto k = build_kernel(radius, f.spec.spacing, [&](double r) {
    return BumpProfile::value(r / radius) * heat_kernel_radial(r, t);
  });
  std::ostringstream tag;
  tag << "localized-mollified(eps=" << eps << ")";
  return convolve(f, k, FieldKind::localized_mollified, eps, tag.str().c_str(),
                  out_region);
}

double discrete_kernel_mass(double eps, double spacing, bool localized) {
  const double radius = localized ? localized_radius(eps) : heat_truncation_radius(eps);
  const double t = 0.5 * eps * eps;
  auto k = build_kernel(radius, spacing, [&](double r) {
    const double base = heat_kernel_radial(r, t);
    return localized ? BumpProfile::value(r / radius) * base : base;
  });
  double total = 0.0;
  for (const auto& row : k.rows)
    for (double w : row.weights) total += w;
  return total;
}

}  // namespace lfpp
