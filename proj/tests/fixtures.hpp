#ifndef GIM_TESTS_FIXTURES_HPP
#define GIM_TESTS_FIXTURES_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "gim/metric_kit.hpp"
#include "gim/pseudo_metric.hpp"
#include "gim/weighted_graph.hpp"

namespace fixtures {

inline gim::WeightedGraph path_graph(int n, double b = 1.0, double m = 1.0) {
  std::vector<gim::Edge> edges;
  for (int v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1, b});
  return gim::WeightedGraph(n, edges, std::vector<double>(static_cast<size_t>(n), m));
}

inline gim::WeightedGraph cycle_graph(int n, double b = 1.0, double m = 1.0) {
  std::vector<gim::Edge> edges;
  for (int v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1, b});
  edges.push_back({0, n - 1, b});
  return gim::WeightedGraph(n, edges, std::vector<double>(static_cast<size_t>(n), m));
}

inline gim::WeightedGraph complete_graph(int n, double b = 1.0, double m = 1.0) {
  std::vector<gim::Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) edges.push_back({u, v, b});
  return gim::WeightedGraph(n, edges, std::vector<double>(static_cast<size_t>(n), m));
}

inline gim::WeightedGraph unit_triangle() { return complete_graph(3); }

inline gim::WeightedGraph with_measures(const gim::WeightedGraph& g,
                                        std::vector<double> m) {
  return gim::WeightedGraph(g.vertex_count(), g.edges(), std::move(m));
}

/// sigma_f for a uniformly random f, scaled so that max |grad f| = 1 - slack.
inline gim::PseudoMetric random_function_metric(const gim::WeightedGraph& g,
                                                std::mt19937& rng,
                                                double slack = 1e-12) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const int n = g.vertex_count();
  std::vector<double> f(static_cast<size_t>(n));
  for (auto& v : f) v = uni(rng);
  auto grad = gim::gradient_norm(g, f);
  double worst = 0.0;
  for (double v : grad) worst = std::max(worst, v);
  if (worst > 0.0)
    for (auto& v : f) v *= (1.0 - slack) / worst;
  return gim::metric_from_function(f);
}

inline std::vector<double> random_measures(int n, std::mt19937& rng,
                                           const std::vector<double>& choices) {
  std::uniform_int_distribution<size_t> pick(0, choices.size() - 1);
  std::vector<double> m(static_cast<size_t>(n));
  for (auto& v : m) v = choices[pick(rng)];
  return m;
}

/// All connected graph shapes on n vertices up to isomorphism, as edge lists.
/// Brute force over edge subsets with permutation-canonical deduplication;
/// fine for n <= 5.
inline std::vector<std::vector<std::pair<int, int>>> connected_shapes(int n) {
  std::vector<std::pair<int, int>> all_pairs;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) all_pairs.push_back({u, v});
  const int P = static_cast<int>(all_pairs.size());

  std::vector<int> perm(static_cast<size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> perms;
  do {
    perms.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));

  auto connected = [&](uint32_t mask) {
    std::vector<int> comp(static_cast<size_t>(n), -1);
    std::vector<int> stack{0};
    comp[0] = 0;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int e = 0; e < P; ++e) {
        if (!(mask & (1u << e))) continue;
        auto [a, b] = all_pairs[static_cast<size_t>(e)];
        int other = a == u ? b : (b == u ? a : -1);
        if (other >= 0 && comp[static_cast<size_t>(other)] < 0) {
          comp[static_cast<size_t>(other)] = 0;
          stack.push_back(other);
        }
      }
    }
    for (int v = 0; v < n; ++v)
      if (comp[static_cast<size_t>(v)] < 0) return false;
    return true;
  };

  auto edge_index = [&](int a, int b) {
    if (a > b) std::swap(a, b);
    for (int e = 0; e < P; ++e)
      if (all_pairs[static_cast<size_t>(e)] == std::make_pair(a, b)) return e;
    return -1;
  };

  std::vector<uint32_t> canon_seen;
  std::vector<std::vector<std::pair<int, int>>> shapes;
  for (uint32_t mask = 0; mask < (1u << P); ++mask) {
    if (n > 1 && mask == 0) continue;
    if (!connected(mask)) continue;
    uint32_t canon = ~0u;
    for (const auto& p : perms) {
      uint32_t relabeled = 0;
      for (int e = 0; e < P; ++e) {
        if (!(mask & (1u << e))) continue;
        auto [a, b] = all_pairs[static_cast<size_t>(e)];
        relabeled |= 1u << edge_index(p[static_cast<size_t>(a)],
                                      p[static_cast<size_t>(b)]);
      }
      canon = std::min(canon, relabeled);
    }
    if (std::find(canon_seen.begin(), canon_seen.end(), canon) !=
        canon_seen.end())
      continue;
    canon_seen.push_back(canon);
    std::vector<std::pair<int, int>> edges;
    for (int e = 0; e < P; ++e)
      if (mask & (1u << e)) edges.push_back(all_pairs[static_cast<size_t>(e)]);
    shapes.push_back(std::move(edges));
  }
  return shapes;
}

}  // namespace fixtures

#endif  // GIM_TESTS_FIXTURES_HPP
