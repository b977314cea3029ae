#include "lfpp/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "lfpp/gff.hpp"
#include "lfpp/metric_graph.hpp"
#include "lfpp/mollify.hpp"
#include "lfpp/parallel.hpp"
#include "lfpp/rng.hpp"

namespace lfpp {

void ScalingTable::add(ScalingEntry e) {
  entries.push_back(e);
  std::sort(entries.begin(), entries.end(),
            [](const ScalingEntry& a, const ScalingEntry& b) { return a.eps > b.eps; });
}

void ScalingTable::validate() const {
  if (!(xi > 0.0)) throw std::invalid_argument("ScalingTable: xi must be > 0");
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& e = entries[k];
    if (!(e.eps > 0.0) || !(e.a_hat > 0.0) || e.n_samples < 1)
      throw std::invalid_argument("ScalingTable: bad entry");
    if (k > 0 && !(entries[k - 1].eps > e.eps))
      throw std::invalid_argument("ScalingTable: eps values must be distinct");
  }
}

bool ScalingTable::covers(double eps) const {
  if (entries.size() < 2) return !entries.empty() && entries[0].eps == eps;
  return eps <= entries.front().eps * (1 + 1e-12) &&
         eps >= entries.back().eps * (1 - 1e-12);
}

double ScalingTable::a_at(double eps) const {
  if (entries.empty()) throw std::invalid_argument("ScalingTable: empty");
  if (!covers(eps))
    throw std::invalid_argument("ScalingTable: eps outside table range (extrapolation refused)");
  if (entries.size() == 1) return entries[0].a_hat;
  // Log-linear interpolation in log eps, consistent with regular variation.
  for (std::size_t k = 1; k < entries.size(); ++k) {
    const auto& hi = entries[k - 1];
    const auto& lo = entries[k];
    if (eps >= lo.eps * (1 - 1e-12)) {
      const double t = (std::log(eps) - std::log(lo.eps)) /
                       (std::log(hi.eps) - std::log(lo.eps));
      return std::exp((1 - t) * std::log(lo.a_hat) + t * std::log(hi.a_hat));
    }
  }
  return entries.back().a_hat;
}

ScalingEntry estimate_a_eps(double eps, double xi, const AepsOptions& opt,
                            std::uint64_t seed) {
  if (!(eps >= 2.0 * opt.spacing))
    throw std::invalid_argument("estimate_a_eps: spacing too coarse relative to eps");
  if (opt.n_samples < 1) throw std::invalid_argument("estimate_a_eps: n_samples >= 1");

  const double s = opt.spacing;
  const double margin = heat_truncation_radius(eps) + 2 * s;
  const int margin_nodes = static_cast<int>(std::ceil(margin / s));
  const int unit_nodes = static_cast<int>(std::lround(1.0 / s));
  GridSpec spec;
  spec.spacing = s;
  spec.nx = spec.ny = unit_nodes + 1 + 2 * margin_nodes;
  spec.origin = complex(-margin_nodes * s, -margin_nodes * s);

  const Region square = Region::rectangle({-0.5 * s, -0.5 * s}, {1 + 0.5 * s, 1 + 0.5 * s});
  const Region out_region =
      Region::rectangle({-1.5 * s, -1.5 * s}, {1 + 1.5 * s, 1 + 1.5 * s});

  std::vector<double> crossings(opt.n_samples);
  parallel_for(opt.n_samples, opt.threads, [&](int r) {
    GridField h = sample_gff(spec, opt.torus_factor, Rng::derive(seed, r));
    if (opt.zero_field)
      for (auto& v : h.values) v = 0.0;
    const GridField m = heat_mollify(h, eps, &out_region);
    const MetricGraph g(m, square, xi);
    std::vector<int> left, right;
    for (int j = 0; j < spec.ny; ++j) {
      const complex zl = spec.node(margin_nodes, j);
      if (zl.imag() < -0.5 * s || zl.imag() > 1 + 0.5 * s) continue;
      left.push_back(g.locate(zl));
      right.push_back(g.locate(spec.node(margin_nodes + unit_nodes, j)));
    }
    crossings[r] = g.set_distance(left, right).raw;
  });

  std::vector<double> sorted = crossings;
  std::sort(sorted.begin(), sorted.end());
  auto median_of = [](const std::vector<double>& v) {
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  };
  const double med = median_of(sorted);

  // Bootstrap standard error of the median.
  double se = 0.0;
  if (opt.n_samples > 1) {
    Rng rng(Rng::derive(seed, 0xB007B007ULL));
    std::vector<double> boot(opt.bootstrap);
    std::vector<double> resample(sorted.size());
    for (int b = 0; b < opt.bootstrap; ++b) {
      for (auto& x : resample)
        x = sorted[rng.uniform_below(sorted.size())];
      std::sort(resample.begin(), resample.end());
      boot[b] = median_of(resample);
    }
    double mean = 0.0;
    for (double x : boot) mean += x;
    mean /= boot.size();
    double var = 0.0;
    for (double x : boot) var += (x - mean) * (x - mean);
    se = std::sqrt(var / (boot.size() - 1));
  }

  ScalingEntry e;
  e.eps = eps;
  e.a_hat = med;
  e.stderr_ = se;
  e.n_samples = opt.n_samples;
  e.spacing = s;
  return e;
}

ExponentFit fit_exponent(const ScalingTable& table) {
  table.validate();
  const auto& es = table.entries;
  if (es.size() < 3) throw std::invalid_argument("fit_exponent: need >= 3 entries");
  if (!(es.front().eps / es.back().eps >= 4.0 * (1 - 1e-12)))
    throw std::invalid_argument("fit_exponent: entries must span >= 2 dyadic octaves");

  const std::size_t n = es.size();
  std::vector<double> x(n), y(n);
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < n; ++k) {
    x[k] = std::log(es[k].eps);
    y[k] = std::log(es[k].a_hat);
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < n; ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_exponent: degenerate eps spread");

  ExponentFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.q_hat = (1.0 - fit.slope) / table.xi;
  fit.residuals.resize(n);
  for (std::size_t k = 0; k < n; ++k)
    fit.residuals[k] = y[k] - (fit.intercept + fit.slope * x[k]);

  // Residual bootstrap for the q_hat uncertainty.
  Rng rng(0x51A751A7ULL);
  const int B = 1000;
  double qs = 0.0, qs2 = 0.0;
  for (int b = 0; b < B; ++b) {
    double bsxy = 0;
    std::vector<double> yb(n);
    for (std::size_t k = 0; k < n; ++k)
      yb[k] = fit.intercept + fit.slope * x[k] +
              fit.residuals[rng.uniform_below(n)];
    double myb = 0;
    for (double v : yb) myb += v;
    myb /= n;
    for (std::size_t k = 0; k < n; ++k) bsxy += (x[k] - mx) * (yb[k] - myb);
    const double qb = (1.0 - bsxy / sxx) / table.xi;
    qs += qb;
    qs2 += qb * qb;
  }
  fit.q_stderr = std::sqrt(std::max(0.0, qs2 / B - (qs / B) * (qs / B)));
  return fit;
}

namespace {
double table_q(const ScalingTable& table) {
  if (table.q_hat) return *table.q_hat;
  return fit_exponent(table).q_hat;
}
}  // namespace

double scaling_ratio(const ScalingTable& table, double r, double eps, double t) {
  if (!(r > 0.0) || !(t > 0.0)) throw std::invalid_argument("scaling_ratio: r,t > 0");
  const double q = table_q(table);
  const double num = table.a_at(eps * t / r);
  const double den = table.a_at(eps * t);
  return r * num / (std::pow(r, table.xi * q) * den);
}

RegularVariationReport regular_variation_check(const ScalingTable& table, double C) {
  if (!(C > 0.0)) throw std::invalid_argument("regular_variation_check: C > 0");
  RegularVariationReport rep;
  rep.C = C;
  rep.q_hat = table_q(table);
  const double target = (1.0 - table.xi * rep.q_hat) * std::log(C);
  int usable = 0;
  for (const auto& e : table.entries) {
    if (!table.covers(C * e.eps)) continue;
    RegularVariationRow row;
    row.eps = e.eps;
    row.deviation = std::abs(std::log(table.a_at(C * e.eps) / e.a_hat) - target);
    // Propagate the relative errors of the two closest entries.
    double rel1 = e.a_hat > 0 ? e.stderr_ / e.a_hat : 0.0;
    double rel2 = rel1;
    for (const auto& o : table.entries)
      if (std::abs(std::log(o.eps) - std::log(C * e.eps)) < 1e-12)
        rel2 = o.a_hat > 0 ? o.stderr_ / o.a_hat : 0.0;
    row.stderr_ = std::hypot(rel1, rel2);
    rep.rows.push_back(row);
    ++usable;
  }
  if (usable < 2 && C != 1.0)
    throw std::invalid_argument("regular_variation_check: C eps outside table for >= 2 entries");

  bool nonincreasing = true, nondecreasing = true;
  for (std::size_t k = 1; k < rep.rows.size(); ++k) {
    // Rows are ordered by decreasing eps, so "later" means smaller eps.
    if (rep.rows[k].deviation > rep.rows[k - 1].deviation + 1e-15) nonincreasing = false;
    if (rep.rows[k].deviation < rep.rows[k - 1].deviation - 1e-15) nondecreasing = false;
  }
  rep.trend = (nonincreasing && nondecreasing) ? "flat"
              : nonincreasing                  ? "decreasing"
              : nondecreasing                  ? "increasing"
                                               : "flat";
  return rep;
}

void write_scaling_table(const std::string& path, const ScalingTable& table) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("scaling table: cannot open " + path);
  out << "eps,a_hat,stderr,n_samples,spacing,xi\n";
  out.precision(17);
  for (const auto& e : table.entries)
    out << e.eps << "," << e.a_hat << "," << e.stderr_ << "," << e.n_samples << ","
        << e.spacing << "," << table.xi << "\n";
}

ScalingTable read_scaling_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("scaling table: cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("eps,a_hat", 0) != 0)
    throw std::runtime_error("scaling table: bad header in " + path);
  ScalingTable table;
  bool have_xi = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream is(line);
    ScalingEntry e;
    double xi;
    char comma;
    if (!(is >> e.eps >> comma >> e.a_hat >> comma >> e.stderr_ >> comma >> e.n_samples >>
          comma >> e.spacing >> comma >> xi))
      throw std::runtime_error("scaling table: bad row '" + line + "'");
    if (have_xi && xi != table.xi)
      throw std::runtime_error("scaling table: inconsistent xi");
    table.xi = xi;
    have_xi = true;
    table.add(e);
  }
  table.validate();
  return table;
}

ScalingTable synthetic_power_table(double xi, double s, double c,
                                   const std::vector<double>& eps_values) {
  ScalingTable table;
  table.xi = xi;
  for (double eps : eps_values) {
    ScalingEntry e;
    e.eps = eps;
    e.a_hat = c * std::pow(eps, s);
    e.stderr_ = 0.0;
    e.n_samples = 1;
    e.spacing = 0.0;
    table.add(e);
  }
  return table;
}

}  // namespace lfpp
