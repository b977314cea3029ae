#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "lfpp/grid.hpp"
#include "lfpp/region.hpp"

namespace lfpp {

// Result of a shortest-path query. Disconnected queries carry raw = +inf and
// an empty geodesic rather than a sentinel used in arithmetic.
struct PathResult {
  double raw = std::numeric_limits<double>::infinity();
  std::optional<double> normalized;  // raw / a_eps when a scaling table is attached
  std::vector<complex> geodesic;     // node polyline, endpoints match the query
  double eps = 0.0;
  FieldKind kernel_kind = FieldKind::deterministic;

  bool disconnected() const { return !std::isfinite(raw); }
};

// Weighted 8-connected lattice graph over a region mask. Edge weight between
// neighbours u,v is |u-v| * (e^{xi f(u)} + e^{xi f(v)}) / 2 where f is the
// mollified field. Only margin-valid nodes participate. Immutable after
// construction; concurrent queries are safe (each owns its scratch state).
class MetricGraph {
 public:
  MetricGraph(const GridField& mollified, const Region& region, double xi);

  int node_count() const { return static_cast<int>(nodes_.size()); }
  double xi() const { return xi_; }
  double spacing() const { return spec_.spacing; }
  const GridSpec& spec() const { return spec_; }
  double eps() const { return eps_; }
  FieldKind kernel_kind() const { return kernel_kind_; }

  // Nearest graph node to z (throws if none within one spacing).
  int locate(complex z) const;
  complex node_position(int node) const;
  // Trapezoid edge weight between adjacent nodes (throws if not adjacent).
  double edge_weight_between(int u, int v) const;
  std::vector<int> nodes_in(const Region& r) const;
  // Nodes within half a lattice diagonal of the circle |z - x| = r.
  std::vector<int> ring_nodes(complex x, double r) const;

  PathResult distance(complex z, complex w) const;
  PathResult set_distance(const Region& A, const Region& B) const;
  PathResult set_distance(const std::vector<int>& sources,
                          const std::vector<int>& targets) const;
  // Dijkstra restricted to nodes of Y.
  PathResult internal_distance(complex z, complex w, const Region& Y) const;
  PathResult internal_set_distance(const std::vector<int>& sources,
                                   const std::vector<int>& targets,
                                   const Region& Y) const;

  // Minimal-weight separating cycle of the annulus A_{r1,r2}(x): the annulus
  // is cut along a radial slit, slit-crossing edges toggle between two layers
  // and Dijkstra runs from one layer to the other (one run per crossing edge,
  // pruned by the best loop so far).
  PathResult distance_around_annulus(complex x, double r1, double r2) const;
  // Same construction on an arbitrary annulus-shaped mask; angle_of gives the
  // winding coordinate (the slit sits at the ±π wrap).
  PathResult distance_around(const Region& mask,
                             const std::function<double(complex)>& angle_of) const;

  // Graph with f added to the mollified field (midpoint rule on e^{xi f}).
  MetricGraph weyl_scaled(const GridField& f) const;
  MetricGraph weyl_scaled(double c) const;

 private:
  struct Node {
    int i, j;
    double factor;  // e^{xi f}
  };
  using EdgeFilter = std::function<bool(int, int)>;

  MetricGraph() = default;

  PathResult run_dijkstra(const std::vector<int>& sources, const std::vector<int>& targets,
                          const std::function<bool(int)>& allowed, double prune_above,
                          const std::vector<double>* source_offsets = nullptr,
                          const EdgeFilter* edge_forbidden = nullptr) const;

  GridSpec spec_;
  double xi_ = 0.0;
  double eps_ = 0.0;
  FieldKind kernel_kind_ = FieldKind::deterministic;
  std::vector<Node> nodes_;
  std::vector<int> grid_to_node_;  // -1 when absent
};

// True iff every polyline node lies in Y.
bool geodesic_in_region(const PathResult& result, const Region& Y);

// Exhaustive simple-path enumeration oracle for small graphs (test support;
// kept in the library so the CLI --oracle mode can use it too).
double brute_force_distance(const MetricGraph& graph, complex z, complex w);

}  // namespace lfpp
