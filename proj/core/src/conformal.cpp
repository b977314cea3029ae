#include "lfpp/conformal.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lfpp {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

class AffineMap final : public ConformalMap {
 public:
  AffineMap(complex a, complex b) : a_(a), b_(b), domain_(Region::everything()) {
    if (a == complex(0.0, 0.0)) throw std::invalid_argument("affine_map: a must be nonzero");
  }
  complex apply(complex z) const override { return a_ * z + b_; }
  complex derivative(complex) const override { return a_; }
  complex second_derivative(complex) const override { return {0.0, 0.0}; }
  complex inverse(complex w) const override { return (w - b_) / a_; }
  const Region& domain() const override { return domain_; }
  std::string kind() const override {
    return a_ == complex(1.0, 0.0) && b_ == complex(0.0, 0.0) ? "identity" : "affine";
  }
  std::string describe() const override {
    std::ostringstream os;
    os.precision(12);
    os << "affine(a=" << a_.real() << "+" << a_.imag() << "i,b=" << b_.real() << "+"
       << b_.imag() << "i)";
    return os.str();
  }
  complex a() const { return a_; }
  complex b() const { return b_; }

 private:
  complex a_, b_;
  Region domain_;
};

class MoebiusMap final : public ConformalMap {
 public:
  MoebiusMap(complex a, complex b, complex c, complex d, Region domain)
      : a_(a), b_(b), c_(c), d_(d), domain_(std::move(domain)) {
    if (a * d - b * c == complex(0.0, 0.0))
      throw std::invalid_argument("moebius_map: ad - bc must be nonzero");
    if (c_ != complex(0.0, 0.0)) {
      const complex pole = -d_ / c_;
      if (domain_.signed_distance(pole) > 0.0)
        throw std::invalid_argument("moebius_map: domain contains the pole");
    }
  }
  complex apply(complex z) const override { return (a_ * z + b_) / (c_ * z + d_); }
  complex derivative(complex z) const override {
    const complex den = c_ * z + d_;
    return (a_ * d_ - b_ * c_) / (den * den);
  }
  complex second_derivative(complex z) const override {
    const complex den = c_ * z + d_;
    return -2.0 * c_ * (a_ * d_ - b_ * c_) / (den * den * den);
  }
  complex inverse(complex w) const override { return (d_ * w - b_) / (-c_ * w + a_); }
  const Region& domain() const override { return domain_; }
  std::string kind() const override { return "moebius"; }
  std::string describe() const override {
    std::ostringstream os;
    os.precision(12);
    os << "moebius(" << a_ << "," << b_ << "," << c_ << "," << d_ << ")";
    return os.str();
  }

 private:
  complex a_, b_, c_, d_;
  Region domain_;
};

class PowerSeriesMap final : public ConformalMap {
 public:
  PowerSeriesMap(complex center, double radius, std::vector<complex> coeffs)
      : center_(center),
        radius_(radius),
        coeffs_(std::move(coeffs)),
        domain_(Region::disk(center, radius)) {
    if (!(radius > 0.0)) throw std::invalid_argument("power_series_map: radius must be > 0");
    if (coeffs_.size() < 2 || coeffs_[1] == complex(0.0, 0.0))
      throw std::invalid_argument("power_series_map: need nonzero linear coefficient");
    certify_injective();
  }
  complex apply(complex z) const override {
    const complex u = z - center_;
    complex acc = coeffs_.back();
    for (std::size_t n = coeffs_.size() - 1; n-- > 0;) acc = acc * u + coeffs_[n];
    return acc;
  }
  complex derivative(complex z) const override {
    const complex u = z - center_;
    const std::size_t N = coeffs_.size();
    complex acc = static_cast<double>(N - 1) * coeffs_[N - 1];
    for (std::size_t n = N - 1; n-- > 1;)
      acc = acc * u + static_cast<double>(n) * coeffs_[n];
    return acc;
  }
  complex second_derivative(complex z) const override {
    const std::size_t N = coeffs_.size();
    if (N < 3) return {0.0, 0.0};
    const complex u = z - center_;
    complex acc = static_cast<double>((N - 1) * (N - 2)) * coeffs_[N - 1];
    for (std::size_t n = N - 1; n-- > 2;)
      acc = acc * u + static_cast<double>(n * (n - 1)) * coeffs_[n];
    return acc;
  }
  complex inverse(complex w) const override {
    // Damped Newton from the affine initial guess.
    complex z = center_ + (w - coeffs_[0]) / coeffs_[1];
    const double limit = 2.0 * radius_;
    if (std::abs(z - center_) > limit) z = center_;
    for (int it = 0; it < 80; ++it) {
      const complex f = apply(z) - w;
      if (std::abs(f) < 1e-13) return z;
      const complex dz = f / derivative(z);
      double damp = 1.0;
      complex zn = z - dz;
      while (std::abs(zn - center_) > limit && damp > 1e-6) {
        damp *= 0.5;
        zn = z - damp * dz;
      }
      z = zn;
    }
    if (std::abs(apply(z) - w) < 1e-10) return z;
    throw std::runtime_error("power_series_map: Newton inversion failed");
  }
  const Region& domain() const override { return domain_; }
  std::string kind() const override { return "power_series"; }
  std::string describe() const override {
    std::ostringstream os;
    os.precision(12);
    os << "power_series(center=" << center_ << ",radius=" << radius_ << ",coeffs=[";
    for (std::size_t n = 0; n < coeffs_.size(); ++n)
      os << (n ? "," : "") << coeffs_[n];
    os << "])";
    return os.str();
  }
  complex center() const { return center_; }
  double radius() const { return radius_; }
  const std::vector<complex>& coefficients() const { return coeffs_; }

 private:
  void certify_injective() const {
    // (1) phi' has no zeros inside: its winding along the boundary must be 0.
    const int n = 1440;
    double winding = 0.0;
    complex prev = derivative(center_ + radius_ * std::polar(1.0, 0.0));
    if (prev == complex(0.0, 0.0))
      throw std::invalid_argument("power_series_map: phi' vanishes on boundary");
    for (int k = 1; k <= n; ++k) {
      const complex cur =
          derivative(center_ + radius_ * std::polar(1.0, kTwoPi * k / n));
      if (cur == complex(0.0, 0.0))
        throw std::invalid_argument("power_series_map: phi' vanishes on boundary");
      winding += std::arg(cur / prev);
      prev = cur;
    }
    if (std::abs(winding) > 1e-3)
      throw std::invalid_argument(
          "power_series_map: phi' has zeros in the domain (not conformal)");

    // (2) boundary image is a simple curve (sampled self-intersection test);
    // with (1) and the argument principle this certifies injectivity.
    const int nb = 720;
    std::vector<complex> img(nb);
    for (int k = 0; k < nb; ++k)
      img[k] = apply(center_ + radius_ * std::polar(1.0, kTwoPi * k / nb));
    auto segments_cross = [](complex p1, complex p2, complex q1, complex q2) {
      auto orient = [](complex a, complex b, complex c) {
        const double v = (b.real() - a.real()) * (c.imag() - a.imag()) -
                         (b.imag() - a.imag()) * (c.real() - a.real());
        return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
      };
      return orient(p1, p2, q1) * orient(p1, p2, q2) < 0 &&
             orient(q1, q2, p1) * orient(q1, q2, p2) < 0;
    };
    for (int i = 0; i < nb; ++i) {
      const complex p1 = img[i];
      const complex p2 = img[(i + 1) % nb];
      for (int j = i + 2; j < nb; ++j) {
        if (i == 0 && j == nb - 1) continue;  // adjacent around the wrap
        if (segments_cross(p1, p2, img[j], img[(j + 1) % nb]))
          throw std::invalid_argument(
              "power_series_map: boundary image self-intersects (not injective)");
      }
    }
  }

  complex center_;
  double radius_;
  std::vector<complex> coeffs_;
  Region domain_;
};

class CompositionMap final : public ConformalMap {
 public:
  CompositionMap(MapPtr outer, MapPtr inner)
      : outer_(std::move(outer)), inner_(std::move(inner)) {
    if (!outer_ || !inner_) throw std::invalid_argument("compose_maps: null map");
    // Sampled containment inner(domain) ⊆ domain(outer).
    if (inner_->domain().kind() != Region::Kind::everything) {
      for (const auto& z : inner_->domain().boundary_samples(256))
        if (outer_->domain().signed_distance(inner_->apply(z)) < 0.0)
          throw std::invalid_argument("compose_maps: image leaves outer domain");
    }
  }
  complex apply(complex z) const override { return outer_->apply(inner_->apply(z)); }
  complex derivative(complex z) const override {
    return outer_->derivative(inner_->apply(z)) * inner_->derivative(z);
  }
  complex second_derivative(complex z) const override {
    const complex w = inner_->apply(z);
    const complex di = inner_->derivative(z);
    return outer_->second_derivative(w) * di * di +
           outer_->derivative(w) * inner_->second_derivative(z);
  }
  complex inverse(complex w) const override {
    return inner_->inverse(outer_->inverse(w));
  }
  const Region& domain() const override { return inner_->domain(); }
  std::string kind() const override { return "composition"; }
  std::string describe() const override {
    return "compose(" + outer_->describe() + "," + inner_->describe() + ")";
  }

 private:
  MapPtr outer_, inner_;
};

}  // namespace

MapPtr identity_map() { return std::make_shared<AffineMap>(complex(1, 0), complex(0, 0)); }

MapPtr affine_map(complex a, complex b) { return std::make_shared<AffineMap>(a, b); }

MapPtr moebius_map(complex a, complex b, complex c, complex d, Region domain) {
  return std::make_shared<MoebiusMap>(a, b, c, d, std::move(domain));
}

MapPtr power_series_map(complex center, double radius, std::vector<complex> coeffs) {
  return std::make_shared<PowerSeriesMap>(center, radius, std::move(coeffs));
}

MapPtr compose_maps(MapPtr outer, MapPtr inner) {
  return std::make_shared<CompositionMap>(std::move(outer), std::move(inner));
}

bool in_lambda_tau(const ConformalMap& map, const Region& V, const Region& U, double tau,
                   double probe_pitch) {
  if (!(tau > 1.0)) throw std::invalid_argument("in_lambda_tau: tau must be > 1");
  if (!(probe_pitch > 0.0)) throw std::invalid_argument("in_lambda_tau: bad probe pitch");
  if (!V.compactly_inside(U)) throw std::invalid_argument("in_lambda_tau: V not ⋐ U");

  const double lo = 1.01 / tau;
  const double hi = tau / 1.01;
  auto check = [&](complex z) {
    const double d = std::abs(map.derivative(z));
    return d >= lo && d <= hi;
  };

  for (const auto& z : V.boundary_samples(1024))
    if (!check(z)) return false;

  // Dense interior probe grid over V's bounding box.
  const auto b = V.boundary_samples(256);
  double xmin = b[0].real(), xmax = b[0].real(), ymin = b[0].imag(), ymax = b[0].imag();
  for (const auto& z : b) {
    xmin = std::min(xmin, z.real());
    xmax = std::max(xmax, z.real());
    ymin = std::min(ymin, z.imag());
    ymax = std::max(ymax, z.imag());
  }
  const int nx = static_cast<int>((xmax - xmin) / probe_pitch) + 2;
  const int ny = static_cast<int>((ymax - ymin) / probe_pitch) + 2;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const complex z(xmin + i * probe_pitch, ymin + j * probe_pitch);
      if (V.signed_distance(z) >= 0.0 && !check(z)) return false;
    }
  return true;
}

GridField coordinate_change_field(const GridField& h, const ConformalMap& map, double q,
                                  const GridSpec& target_spec) {
  target_spec.validate();
  GridField out(target_spec);
  out.kind = FieldKind::coordinate_changed;
  out.kind_param = q;
  out.provenance = h.provenance + "|coord-change(" + map.kind() + ")";
  out.valid.assign(target_spec.size(), 0);

  const double sh = h.spec.spacing;

  // Exact index resampling for lattice-compatible affine maps.
  if (map.kind() == "identity" || map.kind() == "affine") {
    const complex a = map.derivative(complex(0, 0));
    const complex step_i = target_spec.spacing / a;           // dz per +i step
    const complex step_j = complex(0, target_spec.spacing) / a;  // dz per +j step
    const complex base = map.inverse(target_spec.origin);
    auto to_lattice = [&](complex dz, long& p, long& r) {
      p = std::lround(dz.real() / sh);
      r = std::lround(dz.imag() / sh);
      return std::abs(dz.real() / sh - p) < 1e-9 && std::abs(dz.imag() / sh - r) < 1e-9;
    };
    long ip, ir, jp, jr, bp, br;
    if (to_lattice(step_i, ip, ir) && to_lattice(step_j, jp, jr) &&
        to_lattice(base - h.spec.origin, bp, br)) {
      bool any_valid = false;
      for (int j = 0; j < target_spec.ny; ++j)
        for (int i = 0; i < target_spec.nx; ++i) {
          const long si = bp + i * ip + j * jp;
          const long sj = br + i * ir + j * jr;
          if (si < 0 || sj < 0 || si >= h.spec.nx || sj >= h.spec.ny) continue;
          if (!h.is_valid(static_cast<int>(si), static_cast<int>(sj))) continue;
          const std::size_t n = target_spec.index(i, j);
          out.values[n] = h.values[h.spec.index(static_cast<int>(si), static_cast<int>(sj))] -
                          q * std::log(std::abs(a));
          out.valid[n] = 1;
          any_valid = true;
        }
      if (!any_valid)
        throw std::invalid_argument("coordinate_change_field: target exits source window");
      return out;
    }
  }

  bool any_valid = false;
  for (int j = 0; j < target_spec.ny; ++j)
    for (int i = 0; i < target_spec.nx; ++i) {
      const complex w = target_spec.node(i, j);
      complex z;
      try {
        z = map.inverse(w);
      } catch (const std::exception&) {
        continue;  // outside the image; leave invalid
      }
      if (map.domain().signed_distance(z) < 0.0) continue;
      if (!h.spec.contains(z)) continue;
      const double fx = (z.real() - h.spec.origin.real()) / sh;
      const double fy = (z.imag() - h.spec.origin.imag()) / sh;
      const int ci = std::min(static_cast<int>(fx), h.spec.nx - 2);
      const int cj = std::min(static_cast<int>(fy), h.spec.ny - 2);
      if (!h.is_valid(ci, cj) || !h.is_valid(ci + 1, cj) || !h.is_valid(ci, cj + 1) ||
          !h.is_valid(ci + 1, cj + 1))
        continue;
      const double dphi = std::abs(map.derivative(z));
      const std::size_t n = target_spec.index(i, j);
      out.values[n] = h.interpolate(z) - q * std::log(dphi);
      out.valid[n] = 1;
      any_valid = true;
    }
  if (!any_valid)
    throw std::invalid_argument("coordinate_change_field: target exits phi(U)");
  return out;
}

Region koebe_containment(const ConformalMap& map, complex z, double r) {
  if (map.domain().signed_distance(z) < r)
    throw std::invalid_argument("koebe_containment: B_r(z) not inside map domain");
  const double rho = r * std::abs(map.derivative(z)) / 4.0;
  const complex c = map.apply(z);
  for (int k = 0; k < 720; ++k) {
    const complex bnd = map.apply(z + r * std::polar(1.0, kTwoPi * k / 720));
    if (std::abs(bnd - c) < rho * (1.0 - 1e-9))
      throw std::runtime_error("koebe_containment: boundary sample violates certificate");
  }
  return Region::disk(c, rho);
}

DeBrangesReport debranges_check(const ConformalMap& map, complex z, double r, int n_max) {
  if (n_max < 1) throw std::invalid_argument("debranges_check: n_max must be >= 1");
  if (map.domain().signed_distance(z) < r)
    throw std::invalid_argument("debranges_check: B_r(z) not inside map domain");
  const int N = std::max(8 * n_max, 256);
  const complex dz = map.derivative(z);
  std::vector<complex> samples(N);
  for (int k = 0; k < N; ++k) {
    const complex w = std::polar(1.0, kTwoPi * k / N);
    samples[k] = (map.apply(z + r * w) - map.apply(z)) / (r * dz);
  }
  DeBrangesReport rep;
  rep.coefficients.resize(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    complex acc(0, 0);
    for (int k = 0; k < N; ++k)
      acc += samples[k] * std::polar(1.0, -kTwoPi * n * k / N);
    rep.coefficients[n] = acc / static_cast<double>(N);
  }
  for (int n = 2; n <= n_max; ++n) {
    const double ratio = std::abs(rep.coefficients[n]) / n;
    if (ratio > rep.max_ratio) {
      rep.max_ratio = ratio;
      rep.argmax_n = n;
    }
  }
  // Superlinear growth in the tail means the expansion ball leaves the domain
  // of analyticity or injectivity.
  for (int n = (3 * n_max) / 4; n <= n_max; ++n)
    if (std::abs(rep.coefficients[n]) > 5.0 * n)
      throw std::runtime_error("debranges_check: series divergence detected");
  return rep;
}

std::pair<double, double> distortion_interval(double s) {
  if (!(s >= 0.0 && s < 1.0))
    throw std::invalid_argument("distortion_interval: s must be in [0,1)");
  const double lo = (1.0 - s) / std::pow(1.0 + s, 3);
  const double hi = (1.0 + s) / std::pow(1.0 - s, 3);
  return {lo, hi};
}

void MapFamily::validate(double probe_pitch) const {
  for (const auto& m : maps)
    if (!in_lambda_tau(*m, V, U, tau, probe_pitch))
      throw std::invalid_argument("MapFamily: " + m->describe() + " fails Λ_τ(V,U)");
}

std::string MapFamily::describe() const {
  std::ostringstream os;
  os << "family(tau=" << tau << ",V=" << V.describe() << ",U=" << U.describe() << ")[";
  for (std::size_t i = 0; i < maps.size(); ++i)
    os << (i ? ";" : "") << maps[i]->describe();
  os << "]";
  return os.str();
}

namespace {

Region parse_region(std::istringstream& is) {
  std::string kind;
  is >> kind;
  if (kind == "disk") {
    double x, y, r;
    is >> x >> y >> r;
    return Region::disk({x, y}, r);
  }
  if (kind == "annulus") {
    double x, y, r1, r2;
    is >> x >> y >> r1 >> r2;
    return Region::annulus({x, y}, r1, r2);
  }
  if (kind == "rect") {
    double x0, y0, x1, y1;
    is >> x0 >> y0 >> x1 >> y1;
    return Region::rectangle({x0, y0}, {x1, y1});
  }
  if (kind == "everything") return Region::everything();
  throw std::runtime_error("map family: unknown region kind '" + kind + "'");
}

std::string region_record(const Region& r) {
  std::ostringstream os;
  os.precision(17);
  switch (r.kind()) {
    case Region::Kind::disk:
      os << "disk " << r.center().real() << " " << r.center().imag() << " " << r.r1();
      break;
    case Region::Kind::annulus:
      os << "annulus " << r.center().real() << " " << r.center().imag() << " " << r.r1()
         << " " << r.r2();
      break;
    case Region::Kind::rectangle:
      os << "rect " << r.lo().real() << " " << r.lo().imag() << " " << r.hi().real() << " "
         << r.hi().imag();
      break;
    case Region::Kind::everything:
      os << "everything";
      break;
    default:
      throw std::runtime_error("map family: region kind not serializable");
  }
  return os.str();
}

}  // namespace

MapFamily read_map_family(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("map family: cannot open " + path);
  MapFamily fam;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream is(line);
    std::string key;
    if (!(is >> key)) continue;
    try {
      if (key == "tau") {
        is >> fam.tau;
      } else if (key == "V") {
        fam.V = parse_region(is);
      } else if (key == "U") {
        fam.U = parse_region(is);
      } else if (key == "map") {
        std::string kind;
        is >> kind;
        if (kind == "identity") {
          fam.maps.push_back(identity_map());
        } else if (kind == "affine") {
          double ar, ai, br, bi;
          is >> ar >> ai >> br >> bi;
          fam.maps.push_back(affine_map({ar, ai}, {br, bi}));
        } else if (kind == "moebius") {
          double v[8];
          for (auto& x : v) is >> x;
          std::string domkey;
          is >> domkey;
          if (domkey != "domain") throw std::runtime_error("moebius needs domain");
          Region dom = parse_region(is);
          fam.maps.push_back(
              moebius_map({v[0], v[1]}, {v[2], v[3]}, {v[4], v[5]}, {v[6], v[7]}, dom));
        } else if (kind == "power_series") {
          double cx, cy, radius;
          int ncoef;
          is >> cx >> cy >> radius >> ncoef;
          std::vector<complex> coeffs;
          for (int n = 0; n < ncoef; ++n) {
            double re, im;
            if (!(is >> re >> im)) throw std::runtime_error("missing coefficient");
            coeffs.push_back({re, im});
          }
          fam.maps.push_back(power_series_map({cx, cy}, radius, std::move(coeffs)));
        } else {
          throw std::runtime_error("unknown map kind '" + kind + "'");
        }
      } else {
        throw std::runtime_error("unknown key '" + key + "'");
      }
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return fam;
}

void write_map_family(const std::string& path, const MapFamily& fam) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("map family: cannot open " + path);
  out.precision(17);
  out << "tau " << fam.tau << "\n";
  out << "V " << region_record(fam.V) << "\n";
  out << "U " << region_record(fam.U) << "\n";
  for (const auto& m : fam.maps) {
    if (m->kind() == "identity") {
      out << "map identity\n";
    } else if (m->kind() == "affine") {
      const complex a = m->derivative({0, 0});
      const complex b = m->apply({0, 0});
      out << "map affine " << a.real() << " " << a.imag() << " " << b.real() << " "
          << b.imag() << "\n";
    } else if (m->kind() == "power_series") {
      const auto* ps = dynamic_cast<const PowerSeriesMap*>(m.get());
      if (!ps) throw std::runtime_error("map family: bad power series");
      out << "map power_series " << ps->center().real() << " " << ps->center().imag() << " "
          << ps->radius() << " " << ps->coefficients().size();
      for (const auto& c : ps->coefficients()) out << " " << c.real() << " " << c.imag();
      out << "\n";
    } else {
      throw std::runtime_error("map family: kind '" + m->kind() + "' not serializable");
    }
  }
}

}  // namespace lfpp
