#pragma once

#include "lfpp/config.hpp"
#include "lfpp/gff.hpp"
#include "lfpp/metric_graph.hpp"
#include "lfpp/report.hpp"

namespace lfpp {

// Exact affine scaling identity for heat-kernel LFPP: compares the
// a_eps-normalized metric at eps on (a z + b) queries against the rescaled
// metric at eps/|a| built from the exactly index-resampled pullback field.
ExperimentReport run_affine_identity(const ExperimentConfig& cfg, complex a, complex b);

// Path-length sandwich between coordinate-changed localized LFPP at eps and
// base localized LFPP at eps/|phi'(z0)|, over a battery of test paths inside
// B_{2 eps^{1-zeta}}(z0).
ExperimentReport run_small_scale_sandwich(const ExperimentConfig& cfg, complex z0);

// Sup-norm growth of Psi_eps^{phi,z} - Psi_{eps/|phi'(z0)|}^{id,z} and its
// gradient, with fitted log-log exponents checked against -1-zeta / -2-zeta.
ExperimentReport run_kernel_difference_growth(const ExperimentConfig& cfg, complex z0);

// Monte Carlo probability that the field pairing against the kernel
// difference exceeds delta, plus the rescaled H^1 norm of the difference.
ExperimentReport run_field_pairing_deviation(const ExperimentConfig& cfg, complex z0);

// Sup over probes and maps of |<-log|phi'|, Psi_eps^{phi,z}> + log|phi'(z)||.
ExperimentReport run_log_mollification(const ExperimentConfig& cfg);

// Sup over a compact probe set of |localized mollifications at nearby scales|.
ExperimentReport run_mollifier_drift(const ExperimentConfig& cfg);

// Around-vs-across annulus comparison events (initial Lipschitz condition).
struct EventOutcome {
  bool indicator = false;
  double slack1 = 0.0;  // RHS - LHS of the first inequality
  double slack2 = 0.0;
  nlohmann::json detail;
};
ExperimentReport run_event_initial(const ExperimentConfig& cfg, complex x, double r,
                                   double eps);
// Conditions 1-4 of the Lipschitz-improvement regularity events.
ExperimentReport run_event_improving(const ExperimentConfig& cfg, complex x, double r,
                                     double eps);
// Masking test: the initial event indicator only reads the recentred field on
// the annulus A_{r/2,2r}(x).
ExperimentReport run_event_locality_test(const ExperimentConfig& cfg, complex x, double r,
                                         double eps);

// Dyadic-eps convergence diagnostic of normalized coordinate-changed
// localized LFPP, including the cross-map spread.
ExperimentReport run_convergence_diagnostic(const ExperimentConfig& cfg);

// Dispatch by name; extra arguments come from the config's own sections.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

// Internal building blocks shared with the event evaluators and tests.
namespace detail {

// Window grid whose nodes lie on the global lattice (origin = integer
// multiples of spacing), covering `lo..hi` expanded by `margin`.
GridSpec lattice_window(complex lo, complex hi, double spacing, double margin);
GridSpec lattice_window(const Region& around, double spacing, double margin);

GridField make_field(const ExperimentConfig& cfg, const GridSpec& spec,
                     std::uint64_t seed);

// Localized LFPP metric of h^phi over the image of base_region.
struct ImageMetric {
  MapPtr map;
  GridField mollified;
  Region mask = Region::everything();
  std::unique_ptr<MetricGraph> graph;
  double eps = 0.0;
};
ImageMetric build_image_metric(const GridField& h, MapPtr map, double q, double eps,
                               const Region& base_region, double xi, double spacing);

// Image-plane node sets of the circle |z - x| = r (selected through the map).
std::vector<int> image_ring_nodes(const ImageMetric& m, complex x, double r);

// Length of a polyline under e^{xi f}, trapezoid in the field factors with
// sub-spacing resampling of each segment.
double path_length(const std::vector<complex>& path, const GridField& field, double xi,
                   double step);

// Dense polyline of the segment [a, b].
std::vector<complex> segment_path(complex a, complex b, double step);

double sup_norm_scaling_ratio(const ScalingTable& table, double r, double eps, double tau,
                              bool inverse);

}  // namespace detail

}  // namespace lfpp
