#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lfpp/grid.hpp"

namespace lfpp {

struct ScalingEntry {
  double eps = 0.0;
  double a_hat = 0.0;     // median unit-square crossing distance
  double stderr_ = 0.0;   // bootstrap standard error of the median
  int n_samples = 0;
  double spacing = 0.0;
};

// eps -> estimated crossing normalization with Monte Carlo uncertainty.
// Entries sorted by descending eps; interpolation is log-linear in log eps.
struct ScalingTable {
  double xi = 0.0;
  std::vector<ScalingEntry> entries;
  std::optional<double> q_hat;

  void add(ScalingEntry e);
  // Interpolated a_hat at eps (throws outside the covered range).
  double a_at(double eps) const;
  bool covers(double eps) const;
  void validate() const;
};

struct AepsOptions {
  double spacing = 1.0 / 128.0;
  double torus_factor = 2.0;
  int n_samples = 50;
  int bootstrap = 1000;
  int threads = 0;          // 0 = hardware default
  bool zero_field = false;  // variance switch off (degenerate calibration)
};

// Monte Carlo estimate of the median left-right crossing distance of [0,1]^2
// under heat-kernel LFPP at eps: fresh GFF replica per sample, multi-source /
// multi-sink Dijkstra from the left edge nodes to the right edge nodes,
// sample median with bootstrap standard error.
ScalingEntry estimate_a_eps(double eps, double xi, const AepsOptions& opt,
                            std::uint64_t seed);

struct ExponentFit {
  double slope = 0.0;   // d log a / d log eps
  double q_hat = 0.0;   // (1 - slope) / xi
  double intercept = 0.0;
  std::vector<double> residuals;
  double q_stderr = 0.0;  // residual-bootstrap standard error (0 if < 4 points)
};

// Least squares of log a_hat against log eps; q_hat = (1 - slope)/xi.
// Requires >= 3 entries spanning >= 2 dyadic octaves.
ExponentFit fit_exponent(const ScalingTable& table);

// r * a_hat(eps*t/r) / (r^{xi q_hat} * a_hat(eps*t)); refuses extrapolation.
double scaling_ratio(const ScalingTable& table, double r, double eps, double t);

struct RegularVariationRow {
  double eps = 0.0;
  double deviation = 0.0;  // |log(a(C eps)/a(eps)) - (1 - xi q_hat) log C|
  double stderr_ = 0.0;    // propagated from the entry standard errors
};

struct RegularVariationReport {
  double C = 0.0;
  double q_hat = 0.0;
  std::vector<RegularVariationRow> rows;
  std::string trend;  // "decreasing" / "flat" / "increasing"
};

// Deviation from exact regular variation with exponent 1 - xi q_hat, per eps.
RegularVariationReport regular_variation_check(const ScalingTable& table, double C);

// CSV: header "eps,a_hat,stderr,n_samples,spacing,xi".
void write_scaling_table(const std::string& path, const ScalingTable& table);
ScalingTable read_scaling_table(const std::string& path);

// Synthetic exact power-law table a_eps = c * eps^s (test/support tool).
ScalingTable synthetic_power_table(double xi, double s, double c,
                                   const std::vector<double>& eps_values);

}  // namespace lfpp
