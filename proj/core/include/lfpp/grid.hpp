#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace lfpp {

using complex = std::complex<double>;

// Regular lattice window in the plane. node(i,j) = origin + (i*spacing, j*spacing),
// 0 <= i < nx, 0 <= j < ny, values stored row-major (index = j*nx + i).
struct GridSpec {
  int nx = 0;
  int ny = 0;
  double spacing = 0.0;
  complex origin{0.0, 0.0};

  void validate() const;

  std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
  complex node(int i, int j) const {
    return origin + complex(i * spacing, j * spacing);
  }
  complex center() const {
    return origin + complex(0.5 * (nx - 1) * spacing, 0.5 * (ny - 1) * spacing);
  }
  double width() const { return (nx - 1) * spacing; }
  double height() const { return (ny - 1) * spacing; }
  // Euclidean diameter of the node bounding box.
  double diameter() const;
  bool contains(complex z, double margin = 0.0) const;

  bool operator==(const GridSpec& o) const;
};

enum class FieldKind : std::uint8_t {
  deterministic = 0,
  raw_gff = 1,
  heat_mollified = 2,
  localized_mollified = 3,
  coordinate_changed = 4,
};

const char* field_kind_name(FieldKind k);

// Real-valued samples of a field on a lattice window. `kind` tags the last
// transform; `provenance` records the full chain. Nodes can be invalid when a
// transform (mollification) could not be evaluated without leaving the window;
// invalid nodes hold value 0 and are excluded from graphs.
struct GridField {
  GridSpec spec;
  std::vector<double> values;
  std::vector<std::uint8_t> valid;  // empty means "all valid"
  FieldKind kind = FieldKind::deterministic;
  double kind_param = 0.0;  // eps for mollified kinds, q for coordinate-changed
  std::string provenance = "deterministic";

  GridField() = default;
  explicit GridField(const GridSpec& s, double fill = 0.0);

  double& at(int i, int j) { return values[spec.index(i, j)]; }
  double at(int i, int j) const { return values[spec.index(i, j)]; }
  bool is_valid(int i, int j) const {
    return valid.empty() || valid[spec.index(i, j)] != 0;
  }
  bool all_valid() const;
  void mark_invalid(int i, int j);

  // Bilinear interpolation; z must be inside the node bounding box.
  double interpolate(complex z) const;

  void check_finite() const;
};

// Pointwise field algebra (kind/provenance propagate).
GridField add_scalar(const GridField& f, double c);
GridField add_field(const GridField& f, const GridField& g);
GridField scale(const GridField& f, double c);

// H(z) = h(z + b) by exact index shift; b must be an integer multiple of the
// spacing in each coordinate and the shifted window must stay inside f.
GridField translate(const GridField& f, complex b);

// Splice: take `inside` values where mask(node) is true, `outside` otherwise.
template <typename Pred>
GridField splice(const GridField& inside, const GridField& outside, Pred mask) {
  GridField out = outside;
  for (int j = 0; j < out.spec.ny; ++j)
    for (int i = 0; i < out.spec.nx; ++i)
      if (mask(out.spec.node(i, j)))
        out.values[out.spec.index(i, j)] = inside.values[inside.spec.index(i, j)];
  out.provenance = "spliced(" + inside.provenance + "," + outside.provenance + ")";
  return out;
}

}  // namespace lfpp
