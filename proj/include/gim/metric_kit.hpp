#ifndef GIM_METRIC_KIT_HPP
#define GIM_METRIC_KIT_HPP

#include <functional>
#include <optional>
#include <queue>
#include <vector>

#include "gim/pseudo_metric.hpp"
#include "gim/weighted_graph.hpp"

namespace gim {

constexpr double kDefaultEpsFeas = 1e-9;
constexpr double kDefaultTauTri = 1e-9;

/// Per-vertex load (1/m(x)) sum_y b(x,y) sigma(x,y)^2. A pseudo metric is
/// intrinsic iff every load is <= 1 (up to eps_feas).
struct VertexLoadProfile {
  std::vector<double> load;
  double eps_feas = kDefaultEpsFeas;
  double max_load = 0.0;
  int worst_vertex = -1;
  bool is_intrinsic() const { return max_load <= 1.0 + eps_feas; }
};

VertexLoadProfile vertex_loads(const WeightedGraph& graph,
                               const PseudoMetric& sigma,
                               double eps_feas = kDefaultEpsFeas);

/// |nabla f|(x) = ((1/m(x)) sum_y b(x,y) (f(x)-f(y))^2)^{1/2} per vertex.
std::vector<double> gradient_norm(const WeightedGraph& graph,
                                  const std::vector<double>& f);

/// sigma_f(x,y) = |f(x) - f(y)|; intrinsic iff |nabla f| <= 1.
PseudoMetric metric_from_function(const std::vector<double>& f);

/// Edge-indexed weight w, not required symmetric; queried per direction.
class EdgeWeighting {
 public:
  void set(int u, int v, double w);
  std::optional<double> value(int u, int v) const;

  /// min(w(u,v), w(v,u)) over the defined directions; nullopt when neither
  /// direction is defined.
  std::optional<double> symmetrized(int u, int v) const;

 private:
  struct Key {
    int u, v;
    bool operator<(const Key& o) const {
      return u != o.u ? u < o.u : v < o.v;
    }
  };
  std::vector<std::pair<Key, double>> entries_;  // sorted
};

/// Path pseudo metric d_w: per-component shortest paths over the symmetrized
/// weights; the infinity sentinel across components. Every graph edge must
/// carry at least one defined direction. Zero weights are legal.
PseudoMetric path_metric(const WeightedGraph& graph, const EdgeWeighting& w);

/// w(x,y) = min over endpoints of sqrt(m/deg); the induced path metric is
/// intrinsic. Vertices without edges get no weights.
EdgeWeighting default_intrinsic_weighting(const WeightedGraph& graph);

/// s(x,y) = sqrt(m(y)/b(x,y)) on edges; d_s dominates every intrinsic pseudo
/// metric.
EdgeWeighting universal_bound_weighting(const WeightedGraph& graph);
PseudoMetric universal_bound_metric(const WeightedGraph& graph);

/// Dijkstra over an implicit complete-graph weight function; used where
/// materializing the edge set is too large. weight(u,v) must be >= 0.
std::vector<double> shortest_paths_dense(
    int n, int source, const std::function<double(int, int)>& weight);

/// Combinatorial BFS depths from a root; -1 for unreachable vertices.
std::vector<int> bfs_depths(const WeightedGraph& graph, int root);

}  // namespace gim

#endif  // GIM_METRIC_KIT_HPP
