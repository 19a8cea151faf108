#include "gim/metric_kit.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace gim {

// ---------------------------------------------------------------------------
// PseudoMetric

PseudoMetric::PseudoMetric(int n) : n_(n) {
  if (n <= 0) throw std::invalid_argument("metric size must be positive");
  tri_.assign(static_cast<size_t>(n) * static_cast<size_t>(n - 1) / 2, 0.0);
}

size_t PseudoMetric::index(int i, int j) const {
  if (i < 0 || i >= n_ || j < 0 || j >= n_ || i == j)
    throw std::out_of_range("pair index out of range");
  if (i > j) std::swap(i, j);
  // row-major strict upper triangle
  return static_cast<size_t>(i) * static_cast<size_t>(n_) -
         static_cast<size_t>(i) * static_cast<size_t>(i + 1) / 2 +
         static_cast<size_t>(j - i - 1);
}

void PseudoMetric::set(int i, int j, double value) {
  if (value < 0.0 || std::isnan(value))
    throw std::invalid_argument("metric entries must be nonnegative");
  tri_[index(i, j)] = value;
}

std::optional<TriangleViolation> PseudoMetric::check_triangles(
    double tau_tri) const {
  std::optional<TriangleViolation> worst;
  for (int x = 0; x < n_; ++x) {
    for (int z = x + 1; z < n_; ++z) {
      const double direct = (*this)(x, z);
      if (std::isinf(direct)) continue;  // inf <= anything + inf handled below
      for (int y = 0; y < n_; ++y) {
        if (y == x || y == z) continue;
        const double via = (*this)(x, y) + (*this)(y, z);
        const double excess = direct - via - tau_tri;
        if (excess > 0.0 && (!worst || excess > worst->violation))
          worst = TriangleViolation{x, z, y, excess};
      }
    }
  }
  // A finite entry can never exceed an infinite detour; an infinite entry
  // with a finite detour is a violation.
  for (int x = 0; x < n_; ++x)
    for (int z = x + 1; z < n_; ++z) {
      if (!std::isinf((*this)(x, z))) continue;
      for (int y = 0; y < n_; ++y) {
        if (y == x || y == z) continue;
        const double via = (*this)(x, y) + (*this)(y, z);
        if (!std::isinf(via))
          return TriangleViolation{x, z, y, kInfDistance};
      }
    }
  return worst;
}

bool PseudoMetric::has_infinite_entry() const {
  for (double v : tri_)
    if (std::isinf(v)) return true;
  return false;
}

double PseudoMetric::max_finite_entry() const {
  double m = 0.0;
  for (double v : tri_)
    if (std::isfinite(v)) m = std::max(m, v);
  return m;
}

void PseudoMetric::close_triangles() {
  // Floyd-Warshall on the table.
  for (int k = 0; k < n_; ++k)
    for (int i = 0; i < n_; ++i) {
      if (i == k) continue;
      const double dik = (*this)(i, k);
      if (std::isinf(dik)) continue;
      for (int j = i + 1; j < n_; ++j) {
        if (j == k) continue;
        const double alt = dik + (*this)(k, j);
        if (alt < (*this)(i, j)) tri_[index(i, j)] = alt;
      }
    }
}

PseudoMetric PseudoMetric::scaled(double factor) const {
  if (factor < 0.0) throw std::invalid_argument("scale must be nonnegative");
  PseudoMetric out(n_);
  for (size_t k = 0; k < tri_.size(); ++k) out.tri_[k] = tri_[k] * factor;
  return out;
}

PseudoMetric max_combine(const PseudoMetric& a, const PseudoMetric& b) {
  if (a.size() != b.size()) throw std::invalid_argument("shape mismatch");
  PseudoMetric out(a.size());
  for (int i = 0; i < a.size(); ++i)
    for (int j = i + 1; j < a.size(); ++j)
      out.set(i, j, std::max(a(i, j), b(i, j)));
  return out;
}

PseudoMetric blend(const PseudoMetric& a, const PseudoMetric& b, double t) {
  if (a.size() != b.size()) throw std::invalid_argument("shape mismatch");
  if (t < 0.0 || t > 1.0) throw std::invalid_argument("t must be in [0,1]");
  PseudoMetric out(a.size());
  for (int i = 0; i < a.size(); ++i)
    for (int j = i + 1; j < a.size(); ++j)
      out.set(i, j, t * a(i, j) + (1.0 - t) * b(i, j));
  return out;
}

double max_abs_difference(const PseudoMetric& a, const PseudoMetric& b) {
  if (a.size() != b.size()) throw std::invalid_argument("shape mismatch");
  double worst = 0.0;
  for (int i = 0; i < a.size(); ++i)
    for (int j = i + 1; j < a.size(); ++j) {
      const double x = a(i, j), y = b(i, j);
      if (std::isinf(x) && std::isinf(y)) continue;
      worst = std::max(worst, std::abs(x - y));
    }
  return worst;
}

bool dominated_by(const PseudoMetric& a, const PseudoMetric& b, double slack) {
  if (a.size() != b.size()) throw std::invalid_argument("shape mismatch");
  for (int i = 0; i < a.size(); ++i)
    for (int j = i + 1; j < a.size(); ++j) {
      if (std::isinf(b(i, j))) continue;
      if (a(i, j) > b(i, j) + slack) return false;
    }
  return true;
}

// ---------------------------------------------------------------------------
// Loads and gradients

VertexLoadProfile vertex_loads(const WeightedGraph& graph,
                               const PseudoMetric& sigma, double eps_feas) {
  const int n = graph.vertex_count();
  if (sigma.size() != n) throw std::invalid_argument("shape mismatch");
  VertexLoadProfile out;
  out.eps_feas = eps_feas;
  out.load.assign(static_cast<size_t>(n), 0.0);
  for (int x = 0; x < n; ++x) {
    double acc = 0.0;
    for (auto [y, b] : graph.neighbors(x)) {
      const double d = sigma(x, y);
      if (std::isinf(d))
        throw std::invalid_argument("infinite metric entry on an edge");
      acc += b * d * d;
    }
    out.load[static_cast<size_t>(x)] = acc / graph.measure(x);
    if (out.load[static_cast<size_t>(x)] > out.max_load || out.worst_vertex < 0) {
      out.max_load = out.load[static_cast<size_t>(x)];
      out.worst_vertex = x;
    }
  }
  return out;
}

std::vector<double> gradient_norm(const WeightedGraph& graph,
                                  const std::vector<double>& f) {
  const int n = graph.vertex_count();
  if (static_cast<int>(f.size()) != n)
    throw std::invalid_argument("function length mismatch");
  std::vector<double> out(static_cast<size_t>(n), 0.0);
  for (int x = 0; x < n; ++x) {
    double acc = 0.0;
    for (auto [y, b] : graph.neighbors(x)) {
      const double d = f[static_cast<size_t>(x)] - f[static_cast<size_t>(y)];
      acc += b * d * d;
    }
    out[static_cast<size_t>(x)] = std::sqrt(acc / graph.measure(x));
  }
  return out;
}

PseudoMetric metric_from_function(const std::vector<double>& f) {
  const int n = static_cast<int>(f.size());
  PseudoMetric out(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      out.set(i, j, std::abs(f[static_cast<size_t>(i)] - f[static_cast<size_t>(j)]));
  return out;
}

// ---------------------------------------------------------------------------
// EdgeWeighting

void EdgeWeighting::set(int u, int v, double w) {
  if (w < 0.0 || std::isnan(w))
    throw std::invalid_argument("edge weights must be nonnegative");
  Key key{u, v};
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), key,
      [](const auto& a, const Key& b) { return a.first < b; });
  if (it != entries_.end() && !(key < it->first)) {
    it->second = w;
    return;
  }
  entries_.insert(it, {key, w});
}

std::optional<double> EdgeWeighting::value(int u, int v) const {
  Key key{u, v};
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), key,
      [](const auto& a, const Key& b) { return a.first < b; });
  if (it != entries_.end() && !(key < it->first)) return it->second;
  return std::nullopt;
}

std::optional<double> EdgeWeighting::symmetrized(int u, int v) const {
  auto a = value(u, v);
  auto b = value(v, u);
  if (a && b) return std::min(*a, *b);
  if (a) return a;
  return b;
}

// ---------------------------------------------------------------------------
// Path metrics

namespace {

// Binary-heap Dijkstra on the graph adjacency with per-edge weights supplied
// up front (already symmetrized, >= 0).
std::vector<double> dijkstra_sparse(
    const WeightedGraph& graph, int source,
    const std::vector<std::vector<std::pair<int, double>>>& wadj) {
  const int n = graph.vertex_count();
  std::vector<double> dist(static_cast<size_t>(n), kInfDistance);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[static_cast<size_t>(source)] = 0.0;
  heap.push({0.0, source});
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[static_cast<size_t>(u)]) continue;
    for (auto [v, w] : wadj[static_cast<size_t>(u)]) {
      const double nd = d + w;
      if (nd < dist[static_cast<size_t>(v)]) {
        dist[static_cast<size_t>(v)] = nd;
        heap.push({nd, v});
      }
    }
  }
  return dist;
}

}  // namespace

PseudoMetric path_metric(const WeightedGraph& graph, const EdgeWeighting& w) {
  const int n = graph.vertex_count();
  std::vector<std::vector<std::pair<int, double>>> wadj(static_cast<size_t>(n));
  for (const auto& e : graph.edges()) {
    auto sym = w.symmetrized(e.u, e.v);
    if (!sym)
      throw std::invalid_argument("weighting undefined on edge (" +
                                  std::to_string(e.u) + "," +
                                  std::to_string(e.v) + ")");
    wadj[static_cast<size_t>(e.u)].push_back({e.v, *sym});
    wadj[static_cast<size_t>(e.v)].push_back({e.u, *sym});
  }
  PseudoMetric out(n);
  for (int s = 0; s < n; ++s) {
    auto dist = dijkstra_sparse(graph, s, wadj);
    for (int t = s + 1; t < n; ++t) out.set(s, t, dist[static_cast<size_t>(t)]);
  }
  return out;
}

EdgeWeighting default_intrinsic_weighting(const WeightedGraph& graph) {
  EdgeWeighting w;
  for (const auto& e : graph.edges()) {
    const double wu = std::sqrt(graph.measure(e.u) / graph.weighted_degree(e.u));
    const double wv = std::sqrt(graph.measure(e.v) / graph.weighted_degree(e.v));
    const double val = std::min(wu, wv);
    w.set(e.u, e.v, val);
    w.set(e.v, e.u, val);
  }
  return w;
}

EdgeWeighting universal_bound_weighting(const WeightedGraph& graph) {
  EdgeWeighting s;
  for (const auto& e : graph.edges()) {
    s.set(e.u, e.v, std::sqrt(graph.measure(e.v) / e.b));
    s.set(e.v, e.u, std::sqrt(graph.measure(e.u) / e.b));
  }
  return s;
}

PseudoMetric universal_bound_metric(const WeightedGraph& graph) {
  return path_metric(graph, universal_bound_weighting(graph));
}

std::vector<double> shortest_paths_dense(
    int n, int source, const std::function<double(int, int)>& weight) {
  std::vector<double> dist(static_cast<size_t>(n), kInfDistance);
  std::vector<bool> done(static_cast<size_t>(n), false);
  dist[static_cast<size_t>(source)] = 0.0;
  for (int round = 0; round < n; ++round) {
    int u = -1;
    double best = kInfDistance;
    for (int i = 0; i < n; ++i)
      if (!done[static_cast<size_t>(i)] && dist[static_cast<size_t>(i)] < best) {
        best = dist[static_cast<size_t>(i)];
        u = i;
      }
    if (u < 0) break;
    done[static_cast<size_t>(u)] = true;
    for (int v = 0; v < n; ++v) {
      if (done[static_cast<size_t>(v)] || v == u) continue;
      const double nd = best + weight(u, v);
      if (nd < dist[static_cast<size_t>(v)]) dist[static_cast<size_t>(v)] = nd;
    }
  }
  return dist;
}

std::vector<int> bfs_depths(const WeightedGraph& graph, int root) {
  const int n = graph.vertex_count();
  if (root < 0 || root >= n) throw std::out_of_range("root out of range");
  std::vector<int> depth(static_cast<size_t>(n), -1);
  std::queue<int> q;
  depth[static_cast<size_t>(root)] = 0;
  q.push(root);
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (auto [v, b] : graph.neighbors(u)) {
      (void)b;
      if (depth[static_cast<size_t>(v)] < 0) {
        depth[static_cast<size_t>(v)] = depth[static_cast<size_t>(u)] + 1;
        q.push(v);
      }
    }
  }
  return depth;
}

}  // namespace gim
