#include "lfpp/region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace lfpp {

Region Region::disk(complex center, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("Region::disk: r must be > 0");
  Region out;
  out.kind_ = Kind::disk;
  out.center_ = center;
  out.r1_ = r;
  return out;
}

Region Region::annulus(complex center, double r1, double r2) {
  if (!(0.0 < r1 && r1 < r2))
    throw std::invalid_argument("Region::annulus: need 0 < r1 < r2");
  Region out;
  out.kind_ = Kind::annulus;
  out.center_ = center;
  out.r1_ = r1;
  out.r2_ = r2;
  return out;
}

Region Region::rectangle(complex lo, complex hi) {
  if (!(lo.real() < hi.real() && lo.imag() < hi.imag()))
    throw std::invalid_argument("Region::rectangle: lo must be strictly below hi");
  Region out;
  out.kind_ = Kind::rectangle;
  out.lo_ = lo;
  out.hi_ = hi;
  return out;
}

Region Region::union_of(std::vector<Region> parts) {
  if (parts.empty()) throw std::invalid_argument("Region::union_of: empty");
  Region out;
  out.kind_ = Kind::union_of;
  out.parts_ = std::move(parts);
  return out;
}

Region Region::grid_mask(const GridSpec& spec, std::vector<std::uint8_t> mask) {
  spec.validate();
  if (mask.size() != spec.size())
    throw std::invalid_argument("Region::grid_mask: mask size mismatch");
  Region out;
  out.kind_ = Kind::grid_mask;
  out.mask_spec_ = spec;
  out.mask_ = std::move(mask);
  return out;
}

Region Region::everything() {
  Region out;
  out.kind_ = Kind::everything;
  return out;
}

bool Region::contains(complex z) const {
  switch (kind_) {
    case Kind::everything:
      return true;
    case Kind::disk:
      return std::abs(z - center_) < r1_;
    case Kind::annulus: {
      const double d = std::abs(z - center_);
      return d > r1_ && d < r2_;
    }
    case Kind::rectangle:
      return z.real() > lo_.real() && z.real() < hi_.real() && z.imag() > lo_.imag() &&
             z.imag() < hi_.imag();
    case Kind::union_of:
      for (const auto& p : parts_)
        if (p.contains(z)) return true;
      return false;
    case Kind::grid_mask: {
      const double fx = (z.real() - mask_spec_.origin.real()) / mask_spec_.spacing;
      const double fy = (z.imag() - mask_spec_.origin.imag()) / mask_spec_.spacing;
      const int i = static_cast<int>(std::lround(fx));
      const int j = static_cast<int>(std::lround(fy));
      if (i < 0 || j < 0 || i >= mask_spec_.nx || j >= mask_spec_.ny) return false;
      return mask_[mask_spec_.index(i, j)] != 0;
    }
  }
  return false;
}

double Region::signed_distance(complex z) const {
  switch (kind_) {
    case Kind::everything:
      return std::numeric_limits<double>::infinity();
    case Kind::disk:
      return r1_ - std::abs(z - center_);
    case Kind::annulus: {
      const double d = std::abs(z - center_);
      return std::min(d - r1_, r2_ - d);
    }
    case Kind::rectangle: {
      const double dx = std::min(z.real() - lo_.real(), hi_.real() - z.real());
      const double dy = std::min(z.imag() - lo_.imag(), hi_.imag() - z.imag());
      if (dx >= 0 && dy >= 0) return std::min(dx, dy);
      // Outside: negative Euclidean-ish distance is enough for our checks.
      return std::min(dx, dy);
    }
    case Kind::union_of: {
      double best = -std::numeric_limits<double>::infinity();
      for (const auto& p : parts_) best = std::max(best, p.signed_distance(z));
      return best;
    }
    case Kind::grid_mask:
      return contains(z) ? 0.5 * mask_spec_.spacing : -0.5 * mask_spec_.spacing;
  }
  return 0.0;
}

std::vector<complex> Region::boundary_samples(int n) const {
  std::vector<complex> out;
  out.reserve(n);
  const double two_pi = 6.283185307179586476925286766559;
  switch (kind_) {
    case Kind::disk:
      for (int k = 0; k < n; ++k)
        out.push_back(center_ + r1_ * std::polar(1.0, two_pi * k / n));
      break;
    case Kind::annulus:
      for (int k = 0; k < n / 2; ++k) {
        const complex u = std::polar(1.0, two_pi * k / (n / 2));
        out.push_back(center_ + r1_ * u);
        out.push_back(center_ + r2_ * u);
      }
      break;
    case Kind::rectangle: {
      const int per_side = std::max(1, n / 4);
      for (int k = 0; k < per_side; ++k) {
        const double t = static_cast<double>(k) / per_side;
        out.push_back({lo_.real() + t * (hi_.real() - lo_.real()), lo_.imag()});
        out.push_back({hi_.real(), lo_.imag() + t * (hi_.imag() - lo_.imag())});
        out.push_back({hi_.real() - t * (hi_.real() - lo_.real()), hi_.imag()});
        out.push_back({lo_.real(), hi_.imag() - t * (hi_.imag() - lo_.imag())});
      }
      break;
    }
    case Kind::union_of:
      for (const auto& p : parts_) {
        auto b = p.boundary_samples(std::max(8, n / static_cast<int>(parts_.size())));
        out.insert(out.end(), b.begin(), b.end());
      }
      break;
    case Kind::grid_mask:
      for (int j = 0; j < mask_spec_.ny; ++j)
        for (int i = 0; i < mask_spec_.nx; ++i)
          if (mask_[mask_spec_.index(i, j)]) {
            bool edge = i == 0 || j == 0 || i == mask_spec_.nx - 1 || j == mask_spec_.ny - 1;
            if (!edge)
              edge = !mask_[mask_spec_.index(i - 1, j)] || !mask_[mask_spec_.index(i + 1, j)] ||
                     !mask_[mask_spec_.index(i, j - 1)] || !mask_[mask_spec_.index(i, j + 1)];
            if (edge) out.push_back(mask_spec_.node(i, j));
          }
      break;
    case Kind::everything:
      throw std::logic_error("boundary_samples: unbounded region");
  }
  return out;
}

bool Region::compactly_inside(const Region& other, double margin) const {
  if (other.kind() == Kind::everything) return true;
  // Fast exact path for concentric disk/annulus chains, the common case.
  if (kind_ == Kind::disk && other.kind() == Kind::disk)
    return std::abs(center_ - other.center_) + r1_ < other.r1_ - margin;
  const auto pts = boundary_samples(512);
  for (const auto& z : pts)
    if (other.signed_distance(z) <= margin) return false;
  return true;
}

std::string Region::describe() const {
  std::ostringstream os;
  os.precision(12);
  switch (kind_) {
    case Kind::disk:
      os << "disk(" << center_.real() << "," << center_.imag() << ";" << r1_ << ")";
      break;
    case Kind::annulus:
      os << "annulus(" << center_.real() << "," << center_.imag() << ";" << r1_ << "," << r2_
         << ")";
      break;
    case Kind::rectangle:
      os << "rect(" << lo_.real() << "," << lo_.imag() << ";" << hi_.real() << "," << hi_.imag()
         << ")";
      break;
    case Kind::union_of:
      os << "union(" << parts_.size() << ")";
      break;
    case Kind::grid_mask:
      os << "mask(" << mask_spec_.nx << "x" << mask_spec_.ny << ")";
      break;
    case Kind::everything:
      os << "everything";
      break;
  }
  return os.str();
}

}  // namespace lfpp
