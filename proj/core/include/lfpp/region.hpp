#pragma once

#include <string>
#include <vector>

#include "lfpp/grid.hpp"

namespace lfpp {

// Planar regions used for masks, containment checks and graph restriction.
// signed_distance is positive inside, negative outside (exact for the
// primitive kinds, max-combined for unions).
class Region {
 public:
  enum class Kind { disk, annulus, rectangle, union_of, grid_mask, everything };

  static Region disk(complex center, double r);
  static Region annulus(complex center, double r1, double r2);
  static Region rectangle(complex lo, complex hi);
  static Region union_of(std::vector<Region> parts);
  // Mask on an existing grid: explicit per-node membership.
  static Region grid_mask(const GridSpec& spec, std::vector<std::uint8_t> mask);
  static Region everything();

  Kind kind() const { return kind_; }
  bool contains(complex z) const;
  double signed_distance(complex z) const;

  // Compact containment *this ⋐ other: dist(closure, ∂other) > margin,
  // certified by dense boundary sampling.
  bool compactly_inside(const Region& other, double margin = 1e-9) const;

  std::vector<complex> boundary_samples(int n) const;

  complex center() const { return center_; }
  double r1() const { return r1_; }
  double r2() const { return r2_; }
  complex lo() const { return lo_; }
  complex hi() const { return hi_; }

  std::string describe() const;

 private:
  Region() = default;
  Kind kind_ = Kind::everything;
  complex center_{0, 0};
  double r1_ = 0.0, r2_ = 0.0;
  complex lo_{0, 0}, hi_{0, 0};
  std::vector<Region> parts_;
  GridSpec mask_spec_;
  std::vector<std::uint8_t> mask_;
};

}  // namespace lfpp
