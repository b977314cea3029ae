#include "lfpp/metric_graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace lfpp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt2 = 1.4142135623730950488;
const int kDx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
const int kDy[8] = {0, 0, 1, -1, 1, -1, 1, -1};
}  // namespace

MetricGraph::MetricGraph(const GridField& mollified, const Region& region, double xi)
    : spec_(mollified.spec), xi_(xi) {
  if (mollified.kind != FieldKind::heat_mollified &&
      mollified.kind != FieldKind::localized_mollified)
    throw std::invalid_argument("MetricGraph: field must be mollified");
  eps_ = mollified.kind_param;
  kernel_kind_ = mollified.kind;

  grid_to_node_.assign(spec_.size(), -1);
  for (int j = 0; j < spec_.ny; ++j)
    for (int i = 0; i < spec_.nx; ++i) {
      if (!region.contains(spec_.node(i, j))) continue;
      if (!mollified.is_valid(i, j))
        throw std::invalid_argument("MetricGraph: region contains margin-invalid nodes");
      const double f = mollified.at(i, j);
      grid_to_node_[spec_.index(i, j)] = static_cast<int>(nodes_.size());
      nodes_.push_back({i, j, std::exp(xi * f)});
    }
  if (nodes_.empty()) throw std::invalid_argument("MetricGraph: empty region");
  for (const auto& n : nodes_)
    if (!(n.factor > 0.0) || !std::isfinite(n.factor))
      throw std::invalid_argument("MetricGraph: non-finite edge weight");
}

int MetricGraph::locate(complex z) const {
  const int i =
      static_cast<int>(std::lround((z.real() - spec_.origin.real()) / spec_.spacing));
  const int j =
      static_cast<int>(std::lround((z.imag() - spec_.origin.imag()) / spec_.spacing));
  if (i < 0 || j < 0 || i >= spec_.nx || j >= spec_.ny)
    throw std::invalid_argument("MetricGraph::locate: point outside window");
  const int n = grid_to_node_[spec_.index(i, j)];
  if (n < 0) throw std::invalid_argument("MetricGraph::locate: nearest node not in region");
  return n;
}

complex MetricGraph::node_position(int node) const {
  return spec_.node(nodes_[node].i, nodes_[node].j);
}

double MetricGraph::edge_weight_between(int u, int v) const {
  const Node& a = nodes_[u];
  const Node& b = nodes_[v];
  const int dx = std::abs(a.i - b.i);
  const int dy = std::abs(a.j - b.j);
  if (dx > 1 || dy > 1 || (dx == 0 && dy == 0))
    throw std::invalid_argument("edge_weight_between: nodes not adjacent");
  const double len = (dx + dy == 2) ? spec_.spacing * kSqrt2 : spec_.spacing;
  return len * 0.5 * (a.factor + b.factor);
}

std::vector<int> MetricGraph::nodes_in(const Region& r) const {
  std::vector<int> out;
  for (int n = 0; n < node_count(); ++n)
    if (r.contains(node_position(n))) out.push_back(n);
  return out;
}

std::vector<int> MetricGraph::ring_nodes(complex x, double r) const {
  std::vector<int> out;
  const double tol = 0.7072 * spec_.spacing;
  for (int n = 0; n < node_count(); ++n)
    if (std::abs(std::abs(node_position(n) - x) - r) <= tol) out.push_back(n);
  return out;
}

PathResult MetricGraph::run_dijkstra(const std::vector<int>& sources,
                                     const std::vector<int>& targets,
                                     const std::function<bool(int)>& allowed,
                                     double prune_above,
                                     const std::vector<double>* source_offsets,
                                     const EdgeFilter* edge_forbidden) const {
  PathResult result;
  result.eps = eps_;
  result.kernel_kind = kernel_kind_;
  if (sources.empty() || targets.empty())
    throw std::invalid_argument("distance query: empty node set");

  const int N = node_count();
  std::vector<double> dist(N, kInf);
  std::vector<int> pred(N, -1);
  std::vector<std::uint8_t> target_mask(N, 0), settled(N, 0);
  for (int t : targets) target_mask[t] = 1;

  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;
  for (std::size_t s = 0; s < sources.size(); ++s) {
    const int n = sources[s];
    if (allowed && !allowed(n)) continue;
    const double d0 = source_offsets ? (*source_offsets)[s] : 0.0;
    if (d0 < dist[n]) {
      dist[n] = d0;
      pred[n] = -1;
      heap.push({d0, n});
    }
  }

  const double s = spec_.spacing;
  const double diag = s * kSqrt2;
  int found = -1;
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (settled[u]) continue;
    settled[u] = 1;
    if (d > prune_above) break;
    if (target_mask[u]) {
      found = u;
      break;
    }
    const Node& nu = nodes_[u];
    for (int k = 0; k < 8; ++k) {
      const int vi = nu.i + kDx[k];
      const int vj = nu.j + kDy[k];
      if (vi < 0 || vj < 0 || vi >= spec_.nx || vj >= spec_.ny) continue;
      const int v = grid_to_node_[spec_.index(vi, vj)];
      if (v < 0 || settled[v]) continue;
      if (allowed && !allowed(v)) continue;
      if (edge_forbidden && (*edge_forbidden)(u, v)) continue;
      const double len = k < 4 ? s : diag;
      const double nd = d + len * 0.5 * (nu.factor + nodes_[v].factor);
      if (nd < dist[v]) {
        dist[v] = nd;
        pred[v] = u;
        heap.push({nd, v});
      }
    }
  }

  if (found < 0) return result;  // +inf marker, empty geodesic
  result.raw = dist[found];
  std::vector<int> chain;
  for (int n = found; n >= 0; n = pred[n]) chain.push_back(n);
  std::reverse(chain.begin(), chain.end());
  result.geodesic.reserve(chain.size());
  for (int n : chain) result.geodesic.push_back(node_position(n));
  return result;
}

PathResult MetricGraph::distance(complex z, complex w) const {
  return run_dijkstra({locate(z)}, {locate(w)}, nullptr, kInf);
}

PathResult MetricGraph::set_distance(const Region& A, const Region& B) const {
  auto sa = nodes_in(A);
  auto sb = nodes_in(B);
  if (sa.empty() || sb.empty())
    throw std::invalid_argument("set_distance: region contains no nodes");
  return run_dijkstra(sa, sb, nullptr, kInf);
}

PathResult MetricGraph::set_distance(const std::vector<int>& sources,
                                     const std::vector<int>& targets) const {
  return run_dijkstra(sources, targets, nullptr, kInf);
}

PathResult MetricGraph::internal_distance(complex z, complex w, const Region& Y) const {
  const int a = locate(z);
  const int b = locate(w);
  auto allowed = std::function<bool(int)>(
      [this, &Y](int n) { return Y.contains(node_position(n)); });
  if (!allowed(a) || !allowed(b))
    throw std::invalid_argument("internal_distance: endpoint outside Y");
  return run_dijkstra({a}, {b}, allowed, kInf);
}

PathResult MetricGraph::internal_set_distance(const std::vector<int>& sources,
                                              const std::vector<int>& targets,
                                              const Region& Y) const {
  auto allowed = std::function<bool(int)>(
      [this, &Y](int n) { return Y.contains(node_position(n)); });
  return run_dijkstra(sources, targets, allowed, kInf);
}

PathResult MetricGraph::distance_around_annulus(complex x, double r1, double r2) const {
  if (!(0.0 < r1 && r1 < r2))
    throw std::invalid_argument("distance_around_annulus: need 0 < r1 < r2");
  if (r2 - r1 < 3.0 * spec_.spacing)
    throw std::invalid_argument("distance_around_annulus: annulus too thin");
  return distance_around(Region::annulus(x, r1, r2),
                         [x](complex z) { return std::arg(z - x); });
}

PathResult MetricGraph::distance_around(
    const Region& mask, const std::function<double(complex)>& angle_of) const {
  // Edges whose winding coordinate wraps across ±π form the radial slit: a
  // separating cycle must cross the slit, and the minimal one crosses once.
  // Duplicating the slit amounts to running Dijkstra in the cut-free subgraph
  // from the far endpoint of each crossing edge back to its near endpoint.
  struct CutEdge {
    int u, v;  // u on the angle<0 side
    double weight;
  };
  std::vector<std::uint8_t> in_mask(node_count(), 0);
  for (int n = 0; n < node_count(); ++n)
    in_mask[n] = mask.contains(node_position(n)) ? 1 : 0;

  const double s = spec_.spacing;
  std::vector<CutEdge> cuts;
  for (int u = 0; u < node_count(); ++u) {
    if (!in_mask[u]) continue;
    const Node& nu = nodes_[u];
    for (int k = 0; k < 8; ++k) {
      const int vi = nu.i + kDx[k];
      const int vj = nu.j + kDy[k];
      if (vi < 0 || vj < 0 || vi >= spec_.nx || vj >= spec_.ny) continue;
      const int v = grid_to_node_[spec_.index(vi, vj)];
      if (v < 0 || !in_mask[v] || v <= u) continue;
      const double au = angle_of(node_position(u));
      const double av = angle_of(node_position(v));
      if (std::abs(au - av) <= 3.14159265358979323846) continue;
      const double len = k < 4 ? s : s * kSqrt2;
      const double w = len * 0.5 * (nu.factor + nodes_[v].factor);
      cuts.push_back(au < 0 ? CutEdge{u, v, w} : CutEdge{v, u, w});
    }
  }
  if (cuts.empty())
    throw std::invalid_argument("distance_around: annulus too thin (no separating cycle)");

  std::vector<std::pair<int, int>> cut_pairs;
  cut_pairs.reserve(cuts.size());
  for (const auto& c : cuts)
    cut_pairs.emplace_back(std::min(c.u, c.v), std::max(c.u, c.v));
  std::sort(cut_pairs.begin(), cut_pairs.end());
  EdgeFilter forbidden = [&cut_pairs](int a, int b) {
    return std::binary_search(cut_pairs.begin(), cut_pairs.end(),
                              std::make_pair(std::min(a, b), std::max(a, b)));
  };
  auto allowed = std::function<bool(int)>(
      [&in_mask](int n) { return in_mask[n] != 0; });

  PathResult best;
  best.eps = eps_;
  best.kernel_kind = kernel_kind_;
  for (const auto& c : cuts) {
    const std::vector<double> offset{c.weight};
    PathResult r = run_dijkstra({c.v}, {c.u}, allowed,
                                best.disconnected() ? kInf : best.raw, &offset,
                                &forbidden);
    if (!r.disconnected() && r.raw < best.raw) {
      // Close the loop: crossing edge u->v, then the path back to u.
      r.geodesic.insert(r.geodesic.begin(), node_position(c.u));
      best = std::move(r);
    }
  }
  if (best.disconnected())
    throw std::invalid_argument("distance_around: no separating cycle in mask");
  return best;
}

MetricGraph MetricGraph::weyl_scaled(const GridField& f) const {
  if (!(f.spec == spec_)) throw std::invalid_argument("weyl_scaled: spec mismatch");
  MetricGraph out(*this);
  for (auto& n : out.nodes_) n.factor *= std::exp(xi_ * f.at(n.i, n.j));
  return out;
}

MetricGraph MetricGraph::weyl_scaled(double c) const {
  MetricGraph out(*this);
  const double k = std::exp(xi_ * c);
  for (auto& n : out.nodes_) n.factor *= k;
  return out;
}

bool geodesic_in_region(const PathResult& result, const Region& Y) {
  if (result.geodesic.empty())
    throw std::invalid_argument("geodesic_in_region: result has no geodesic");
  for (const auto& z : result.geodesic)
    if (!Y.contains(z)) return false;
  return true;
}

double brute_force_distance(const MetricGraph& graph, complex z, complex w) {
  const int start = graph.locate(z);
  const int goal = graph.locate(w);
  const int N = graph.node_count();
  if (N > 36) throw std::invalid_argument("brute_force_distance: graph too large");

  // Adjacency by node positions, weights through the public accessor.
  std::vector<std::vector<std::pair<int, double>>> adj(N);
  const double s = graph.spacing();
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      if (a == b) continue;
      const complex d = graph.node_position(a) - graph.node_position(b);
      const double dx = std::abs(d.real()) / s;
      const double dy = std::abs(d.imag()) / s;
      if (dx < 1.5 && dy < 1.5) adj[a].push_back({b, graph.edge_weight_between(a, b)});
    }

  // Exhaustive enumeration of simple paths with running-sum pruning.
  std::vector<std::uint8_t> used(N, 0);
  double best = kInf;
  std::function<void(int, double)> dfs = [&](int u, double acc) {
    if (acc >= best) return;
    if (u == goal) {
      best = acc;
      return;
    }
    used[u] = 1;
    for (const auto& [v, wgt] : adj[u])
      if (!used[v]) dfs(v, acc + wgt);
    used[u] = 0;
  };
  dfs(start, 0.0);
  return best;
}

}  // namespace lfpp
