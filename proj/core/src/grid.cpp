#include "lfpp/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace lfpp {

void GridSpec::validate() const {
  if (nx < 2 || ny < 2) throw std::invalid_argument("GridSpec: nx and ny must be >= 2");
  if (!(spacing > 0.0)) throw std::invalid_argument("GridSpec: spacing must be > 0");
  if (!std::isfinite(origin.real()) || !std::isfinite(origin.imag()))
    throw std::invalid_argument("GridSpec: origin must be finite");
}

double GridSpec::diameter() const {
  return std::hypot(width(), height());
}

bool GridSpec::contains(complex z, double margin) const {
  const double x = z.real() - origin.real();
  const double y = z.imag() - origin.imag();
  return x >= margin && y >= margin && x <= width() - margin && y <= height() - margin;
}

bool GridSpec::operator==(const GridSpec& o) const {
  return nx == o.nx && ny == o.ny && spacing == o.spacing && origin == o.origin;
}

const char* field_kind_name(FieldKind k) {
  switch (k) {
    case FieldKind::deterministic: return "deterministic";
    case FieldKind::raw_gff: return "raw-gff";
    case FieldKind::heat_mollified: return "heat-mollified";
    case FieldKind::localized_mollified: return "localized-mollified";
    case FieldKind::coordinate_changed: return "coordinate-changed";
  }
  return "?";
}

GridField::GridField(const GridSpec& s, double fill) : spec(s) {
  spec.validate();
  values.assign(spec.size(), fill);
}

bool GridField::all_valid() const {
  if (valid.empty()) return true;
  for (auto v : valid)
    if (!v) return false;
  return true;
}

void GridField::mark_invalid(int i, int j) {
  if (valid.empty()) valid.assign(spec.size(), 1);
  valid[spec.index(i, j)] = 0;
  values[spec.index(i, j)] = 0.0;
}

double GridField::interpolate(complex z) const {
  const double fx = (z.real() - spec.origin.real()) / spec.spacing;
  const double fy = (z.imag() - spec.origin.imag()) / spec.spacing;
  if (fx < 0.0 || fy < 0.0 || fx > spec.nx - 1 || fy > spec.ny - 1)
    throw std::out_of_range("GridField::interpolate: point outside window");
  int i = static_cast<int>(fx);
  int j = static_cast<int>(fy);
  if (i == spec.nx - 1) --i;
  if (j == spec.ny - 1) --j;
  const double tx = fx - i;
  const double ty = fy - j;
  const double v00 = values[spec.index(i, j)];
  const double v10 = values[spec.index(i + 1, j)];
  const double v01 = values[spec.index(i, j + 1)];
  const double v11 = values[spec.index(i + 1, j + 1)];
  return (1 - tx) * (1 - ty) * v00 + tx * (1 - ty) * v10 + (1 - tx) * ty * v01 +
         tx * ty * v11;
}

void GridField::check_finite() const {
  for (double v : values)
    if (!std::isfinite(v)) throw std::runtime_error("GridField: non-finite value");
}

namespace {

void require_same_spec(const GridSpec& a, const GridSpec& b) {
  if (!(a == b)) throw std::invalid_argument("field spec mismatch");
}

}  // namespace

GridField add_scalar(const GridField& f, double c) {
  GridField out = f;
  for (auto& v : out.values) v += c;
  if (!out.valid.empty())
    for (std::size_t n = 0; n < out.values.size(); ++n)
      if (!out.valid[n]) out.values[n] = 0.0;
  return out;
}

GridField add_field(const GridField& f, const GridField& g) {
  require_same_spec(f.spec, g.spec);
  GridField out = f;
  for (std::size_t n = 0; n < out.values.size(); ++n) out.values[n] += g.values[n];
  if (!g.valid.empty()) {
    if (out.valid.empty()) out.valid.assign(out.spec.size(), 1);
    for (std::size_t n = 0; n < out.values.size(); ++n)
      if (!g.valid[n]) {
        out.valid[n] = 0;
        out.values[n] = 0.0;
      }
  }
  out.provenance = f.provenance + "+" + g.provenance;
  return out;
}

GridField scale(const GridField& f, double c) {
  GridField out = f;
  for (auto& v : out.values) v *= c;
  return out;
}

GridField translate(const GridField& f, complex b) {
  const double s = f.spec.spacing;
  const double dxf = b.real() / s;
  const double dyf = b.imag() / s;
  const long dx = std::lround(dxf);
  const long dy = std::lround(dyf);
  if (std::abs(dxf - dx) > 1e-9 || std::abs(dyf - dy) > 1e-9)
    throw std::invalid_argument("translate: b must be an integer lattice vector");

  // H(z) = h(z + b). Node (i,j) of the result carries the same sample as node
  // (i,j) of f, the window itself moves by -b, so every value stays available
  // and translating by b then -b is the identity bit-for-bit.
  GridField out = f;
  out.spec.origin = f.spec.origin - complex(dx * s, dy * s);
  out.provenance = f.provenance + "|translate";
  return out;
}

}  // namespace lfpp
