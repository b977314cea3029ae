#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lfpp/gff.hpp"
#include "lfpp/kernels.hpp"
#include "lfpp/mollify.hpp"
#include "lfpp/rng.hpp"

using namespace lfpp;

namespace {
constexpr double kPi = 3.14159265358979323846264338328;

GridField gaussian_bump_field(const GridSpec& spec, complex c, double sigma, double amp) {
  GridField f(spec);
  for (int j = 0; j < spec.ny; ++j)
    for (int i = 0; i < spec.nx; ++i) {
      const complex z = spec.node(i, j);
      f.at(i, j) = amp * std::exp(-std::norm(z - c) / (2.0 * sigma * sigma));
    }
  return f;
}
}  // namespace

TEST_CASE("gff sampling is deterministic and pinned") {
  GridSpec spec{65, 65, 1.0 / 32.0, {-1.0, -1.0}};
  const GridField a = sample_gff(spec, 2.0, 12345);
  const GridField b = sample_gff(spec, 2.0, 12345);
  CHECK(a.values == b.values);  // bit-identical
  const GridField c = sample_gff(spec, 2.0, 54321);
  CHECK(a.values != c.values);
  CHECK(a.kind == FieldKind::raw_gff);

  // Normalization: circle average of radius 1 about the window center is 0.
  // (window [-1,1]^2 contains the unit circle about 0 exactly)
  const double pin = circle_average(a, spec.center(), 1.0);
  CHECK(std::abs(pin) < 1e-8);
}

TEST_CASE("window too large for torus is rejected and small eps guard works") {
  GridSpec spec{65, 65, 1.0 / 32.0, {-1.0, -1.0}};
  CHECK_THROWS_AS(sample_gff(spec, 1.0, 7), std::invalid_argument);
  const GridField h = sample_gff(spec, 2.0, 7);
  CHECK_THROWS_AS(heat_mollify(h, 1.0 / 64.0), std::invalid_argument);
}

TEST_CASE("circle average basics") {
  GridSpec spec{129, 129, 1.0 / 64.0, {-1.0, -1.0}};
  SUBCASE("constant field") {
    GridField f(spec, 4.5);
    CHECK(circle_average(f, {0, 0}, 0.5) == doctest::Approx(4.5).epsilon(1e-12));
  }
  SUBCASE("odd field averages to zero") {
    GridField f(spec);
    for (int j = 0; j < spec.ny; ++j)
      for (int i = 0; i < spec.nx; ++i) f.at(i, j) = spec.node(i, j).real();
    CHECK(std::abs(circle_average(f, {0, 0}, 0.5)) < 1e-12);
  }
  SUBCASE("refinement oracle on a sampled field") {
    const GridField h = sample_gff(spec, 2.0, 31);
    const double coarse = circle_average(h, {0.1, -0.2}, 0.4);
    // 4x finer angular quadrature than the implementation, same bilinear field.
    const int n = 4 * std::max(64, 64 * static_cast<int>(std::ceil(2 * kPi * 0.4 * 64)));
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
      const double a = 2 * kPi * k / n;
      sum += h.interpolate(complex(0.1, -0.2) + 0.4 * complex(std::cos(a), std::sin(a)));
    }
    CHECK(coarse == doctest::Approx(sum / n).epsilon(1e-6));
  }
  SUBCASE("circle exiting the window is rejected") {
    GridField f(spec, 1.0);
    CHECK_THROWS_AS(circle_average(f, {0.9, 0.0}, 0.5), std::invalid_argument);
  }
}

TEST_CASE("circle average variance calibration: Var(h_r - h_1) ~ log(1/r)") {
  // Monte Carlo oracle over seeds; the log-correlation of circle averages is
  // the calibration target for the spectral synthesis normalization.
  GridSpec spec{81, 81, 1.0 / 32.0, {-1.25, -1.25}};
  const int n_seeds = 1000;
  const double radii[2] = {0.5, 0.25};
  double sum[2] = {0, 0}, sumsq[2] = {0, 0};
  for (int s = 0; s < n_seeds; ++s) {
    const GridField h = sample_gff(spec, 2.0, Rng::derive(777, s));
    const double h1 = circle_average(h, {0, 0}, 1.0);
    for (int k = 0; k < 2; ++k) {
      const double d = circle_average(h, {0, 0}, radii[k]) - h1;
      sum[k] += d;
      sumsq[k] += d * d;
    }
  }
  double var[2], se[2];
  for (int k = 0; k < 2; ++k) {
    const double mean = sum[k] / n_seeds;
    var[k] = sumsq[k] / n_seeds - mean * mean;
    se[k] = var[k] * std::sqrt(2.0 / (n_seeds - 1));
  }
  // Slope of variance against log(1/r) through the two calibration radii.
  const double slope = (var[1] - var[0]) / (std::log(4.0) - std::log(2.0));
  const double slope_se = std::hypot(se[0], se[1]) / std::log(2.0);
  INFO("var(1/2)=", var[0], " var(1/4)=", var[1], " slope=", slope, " se=", slope_se);
  CHECK(std::abs(slope - 1.0) < 3.0 * slope_se + 0.05);
}

TEST_CASE("heat mollifier exactness examples") {
  GridSpec spec{161, 161, 1.0 / 64.0, {-1.25, -1.25}};
  const double eps = 0.1;

  SUBCASE("constant in, constant out") {
    GridField f(spec, 2.5);
    const GridField g = heat_mollify(f, eps);
    for (int j = 0; j < spec.ny; ++j)
      for (int i = 0; i < spec.nx; ++i)
        if (g.is_valid(i, j)) CHECK(g.at(i, j) == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(!g.all_valid());  // border ring is margin-invalid
  }
  SUBCASE("linear field is reproduced at interior nodes") {
    GridField f(spec);
    for (int j = 0; j < spec.ny; ++j)
      for (int i = 0; i < spec.nx; ++i) f.at(i, j) = spec.node(i, j).real();
    const GridField g = heat_mollify(f, eps);
    int checked = 0;
    for (int j = 0; j < spec.ny; ++j)
      for (int i = 0; i < spec.nx; ++i)
        if (g.is_valid(i, j)) {
          CHECK(g.at(i, j) == doctest::Approx(spec.node(i, j).real()).epsilon(1e-9));
          ++checked;
        }
    CHECK(checked > 100);
  }
  SUBCASE("kernel mass is 1 within 1e-12") {
    CHECK(discrete_kernel_mass(eps, spec.spacing, false) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(discrete_kernel_mass(eps, spec.spacing, true) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("heat mollifier matches direct quadrature of the convolution integral") {
  // Gaussian bump input; oracle = iterated adaptive quadrature of
  // (bump * p_{eps^2/2})(z), which has the closed form of a widened bump but
  // is computed here numerically and independently.
  GridSpec spec{161, 161, 1.0 / 64.0, {-1.25, -1.25}};
  const double eps = 0.15;
  const double sigma = 0.2, amp = 1.7;
  const complex c{0.1, -0.05};
  const GridField f = gaussian_bump_field(spec, c, sigma, amp);
  const GridField g = heat_mollify(f, eps);

  // Probes are exact lattice nodes so the oracle integrates at the same point.
  const std::pair<int, int> probe_idx[5] = {{80, 80}, {86, 77}, {67, 90}, {95, 86}, {83, 99}};
  for (const auto& [i, j] : probe_idx) {
    const complex z = spec.node(i, j);
    auto inner = [&](double y) {
      return integrate_adaptive(
          [&](double x) {
            const complex w{x, y};
            return amp * std::exp(-std::norm(w - c) / (2 * sigma * sigma)) *
                   heat_kernel(z - w, 0.5 * eps * eps);
          },
          z.real() - 8 * eps, z.real() + 8 * eps, 1e-10);
    };
    const double oracle =
        integrate_adaptive(inner, z.imag() - 8 * eps, z.imag() + 8 * eps, 1e-9);
    REQUIRE(g.is_valid(i, j));
    CHECK(g.at(i, j) == doctest::Approx(oracle).epsilon(1e-6));
  }
}

TEST_CASE("localized mollifier: plateau, locality, and comparison") {
  GridSpec spec{161, 161, 1.0 / 64.0, {-1.25, -1.25}};
  const double eps = 0.1;
  const double R = localized_radius(eps);

  SUBCASE("constant in, constant out (Weyl shift compatibility)") {
    GridField f(spec, -1.25);
    const GridField g = localized_mollify(f, eps);
    for (int j = 0; j < spec.ny; ++j)
      for (int i = 0; i < spec.nx; ++i)
        if (g.is_valid(i, j)) CHECK(g.at(i, j) == doctest::Approx(-1.25).epsilon(1e-12));
  }

  SUBCASE("mollifiers commute with scalar addition (linearity to 1e-12)") {
    const GridField h = sample_gff(spec, 2.0, 404);
    const double cshift = 0.773;
    const GridField a = localized_mollify(add_scalar(h, cshift), eps);
    const GridField b = add_scalar(localized_mollify(h, eps), cshift);
    for (std::size_t n = 0; n < a.values.size(); ++n)
      if (!a.valid.empty() && a.valid[n])
        CHECK(a.values[n] == doctest::Approx(b.values[n]).epsilon(1e-12));
  }

  SUBCASE("exact locality: masking outside B_R(z) never changes the value at z") {
    const GridField h = sample_gff(spec, 2.0, 505);
    const GridField g = localized_mollify(h, eps);
    // Corrupt everything outside the closed ball of radius R about z.
    const complex z{0.0, 0.0};
    GridField corrupted = h;
    Rng rng(9);
    for (int j = 0; j < spec.ny; ++j)
      for (int i = 0; i < spec.nx; ++i)
        if (std::abs(spec.node(i, j) - z) > R)
          corrupted.at(i, j) += 10.0 * rng.normal();
    const GridField g2 = localized_mollify(corrupted, eps);
    const int ci = 80, cj = 80;  // node at z = (0,0)
    REQUIRE(spec.node(ci, cj) == z);
    CHECK(g.at(ci, cj) == g2.at(ci, cj));  // exact, bit-for-bit
  }

  SUBCASE("sup |heat - localized| strictly decreasing in eps") {
    GridSpec fine{219, 219, 1.0 / 128.0, {-0.8515625, -0.8515625}};
    const GridField h = sample_gff(fine, 2.0, 606);
    double prev = 1e300;
    for (double e : {0.1, 0.05, 0.025}) {
      const GridField a = heat_mollify(h, e);
      const GridField b = localized_mollify(h, e);
      double sup = 0.0;
      int counted = 0;
      for (std::size_t n = 0; n < a.values.size(); ++n)
        if (a.valid[n] && b.valid[n]) {
          sup = std::max(sup, std::abs(a.values[n] - b.values[n]));
          ++counted;
        }
      CHECK(counted > 1000);
      CHECK(sup < prev);
      prev = sup;
    }
  }
}

TEST_CASE("mollifying an even field preserves the symmetry bit-for-bit") {
  GridSpec spec{130, 130, 1.0 / 64.0, {-1.0, -1.0}};  // even counts, center between nodes
  const GridField h = sample_gff(spec, 2.0, 808);
  GridField f(spec);
  // Symmetrize: f(z) = h(z) + h(-z) about the window center.
  for (int j = 0; j < spec.ny; ++j)
    for (int i = 0; i < spec.nx; ++i)
      f.at(i, j) = h.at(i, j) + h.at(spec.nx - 1 - i, spec.ny - 1 - j);
  f.kind = FieldKind::deterministic;
  for (const bool localized : {false, true}) {
    const GridField g = localized ? localized_mollify(f, 0.1) : heat_mollify(f, 0.1);
    for (int j = 0; j < spec.ny; ++j)
      for (int i = 0; i < spec.nx; ++i) {
        const int mi = spec.nx - 1 - i, mj = spec.ny - 1 - j;
        CHECK(g.is_valid(i, j) == g.is_valid(mi, mj));
        if (g.is_valid(i, j)) CHECK(g.at(i, j) == g.at(mi, mj));
      }
  }
}

TEST_CASE("gmc mass") {
  GridSpec spec{161, 161, 1.0 / 64.0, {-1.25, -1.25}};
  const Region disk = Region::disk({0, 0}, 0.5);
  const double eps = 0.1;

  SUBCASE("gamma = 0 gives Lebesgue area of the node set") {
    GridField f(spec);
    f.kind = FieldKind::raw_gff;
    const double mass = gmc_mass(f, eps, 0.0, disk);
    int count = 0;
    for (int j = 0; j < spec.ny; ++j)
      for (int i = 0; i < spec.nx; ++i)
        if (disk.contains(spec.node(i, j))) ++count;
    CHECK(mass == doctest::Approx(count * spec.spacing * spec.spacing).epsilon(1e-12));
  }
  SUBCASE("constant field") {
    GridField f(spec, 0.8);
    f.kind = FieldKind::raw_gff;
    const double gamma = 0.5;
    const double mass = gmc_mass(f, eps, gamma, disk);
    const double area = gmc_mass(add_scalar(f, -0.8), eps, 0.0, disk);
    CHECK(mass == doctest::Approx(std::pow(eps, gamma * gamma / 2) * std::exp(gamma * 0.8) *
                                  area / std::pow(eps, 0.0))
                      .epsilon(1e-9));
  }
  SUBCASE("region beyond the margin-safe nodes is rejected") {
    GridField f(spec);
    f.kind = FieldKind::raw_gff;
    CHECK_THROWS_AS(gmc_mass(f, eps, 0.5, Region::disk({0, 0}, 1.2)), std::invalid_argument);
  }
}

TEST_CASE("gmc mass is stable under eps refinement (Monte Carlo)") {
  // The area measure is an a.s. weak limit; the mean mass at eps and eps/2
  // agrees within Monte Carlo error.
  GridSpec spec{117, 117, 1.0 / 48.0, {-1.2083333333333333, -1.2083333333333333}};
  const Region disk = Region::disk({0, 0}, 0.35);
  const double gamma = 0.5;
  const int n = 200;
  double s1 = 0, s2 = 0, q1 = 0, q2 = 0;
  for (int k = 0; k < n; ++k) {
    const GridField h = sample_gff(spec, 2.0, Rng::derive(2024, k));
    const double m1 = gmc_mass(h, 0.12, gamma, disk);
    const double m2 = gmc_mass(h, 0.06, gamma, disk);
    s1 += m1;
    s2 += m2;
    q1 += m1 * m1;
    q2 += m2 * m2;
  }
  const double mean1 = s1 / n, mean2 = s2 / n;
  const double se1 = std::sqrt((q1 / n - mean1 * mean1) / (n - 1));
  const double se2 = std::sqrt((q2 / n - mean2 * mean2) / (n - 1));
  INFO("mean(eps)=", mean1, "+-", se1, " mean(eps/2)=", mean2, "+-", se2);
  CHECK(std::abs(mean1 - mean2) < 3.0 * std::hypot(se1, se2));
}

TEST_CASE("h1 norm") {
  GridSpec spec{101, 101, 0.02, {-1.0, -1.0}};
  const Region box = Region::rectangle({-0.5, -0.5}, {0.5, 0.5});
  SUBCASE("zero field") {
    CHECK(h1_norm(GridField(spec), box) == 0.0);
  }
  SUBCASE("constant on a region of area A gives c sqrt(A)") {
    GridField f(spec, 3.0);
    int count = 0;
    for (int j = 0; j < spec.ny; ++j)
      for (int i = 0; i < spec.nx; ++i)
        if (box.contains(spec.node(i, j))) ++count;
    const double area = count * spec.spacing * spec.spacing;
    CHECK(h1_norm(f, box) == doctest::Approx(3.0 * std::sqrt(area)).epsilon(1e-9));
  }
  SUBCASE("empty region rejected") {
    CHECK_THROWS_AS(h1_norm(GridField(spec), Region::disk({5, 5}, 0.1)),
                    std::invalid_argument);
  }
}

TEST_CASE("spectral H^-1 norm: single-mode closed form") {
  // Real plane wave A cos(k x): two conjugate modes of weight A L / 2 each,
  // so the norm is A L / (sqrt(2) |k|).
  const int m = 64;
  const double spacing = 1.0 / 16.0;
  TorusField f;
  f.m = m;
  f.spacing = spacing;
  f.values.resize(static_cast<std::size_t>(m) * m);
  const double L = f.side();
  const double A = 1.4;
  const int mode = 3;
  const double kx = 2 * kPi * mode / L;
  for (int q = 0; q < m; ++q)
    for (int p = 0; p < m; ++p)
      f.values[f.index(p, q)] = A * std::cos(kx * p * spacing);
  const double expect = A * L / (std::sqrt(2.0) * kx);
  CHECK(spectral_hminus1_norm(f) == doctest::Approx(expect).epsilon(1e-6));

  SUBCASE("zero field") {
    TorusField z = f;
    for (auto& v : z.values) v = 0.0;
    CHECK(spectral_hminus1_norm(z) == 0.0);
  }
}
