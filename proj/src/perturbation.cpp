#include "gim/perturbation.hpp"

#include <cmath>
#include <stdexcept>

namespace gim {

std::optional<PerturbationWitness> perturbation_witness(
    const WeightedGraph& graph, const PseudoMetric& kappa, double eps_feas) {
  const int n = graph.vertex_count();
  if (kappa.size() != n) throw std::invalid_argument("shape mismatch");
  if (!components(graph).connected())
    throw std::invalid_argument("perturbation_witness requires connectivity");
  if (kappa.has_infinite_entry())
    throw std::invalid_argument("metric table must be finite");

  // Pick x: lowest vertex with a neighbor z such that both have N >= 2.
  int x = -1, y = -1;
  for (int u = 0; u < n && x < 0; ++u) {
    if (graph.neighbor_count(u) < 2) continue;
    for (auto [z, b] : graph.neighbors(u)) {
      (void)b;
      if (graph.neighbor_count(z) >= 2) {
        x = u;
        break;
      }
    }
  }
  if (x < 0) return std::nullopt;  // star graph (or a single edge)

  // y minimizes kappa(x,.) among neighbors with N >= 2; ties by index.
  double best = kInfDistance;
  for (auto [z, b] : graph.neighbors(x)) {
    (void)b;
    if (graph.neighbor_count(z) >= 2 && kappa(x, z) < best) {
      best = kappa(x, z);
      y = z;
    }
  }

  PerturbationWitness wit;
  wit.x = x;
  wit.y = y;
  wit.input_xy = kappa(x, y);

  double s = kInfDistance;
  for (auto [z, b] : graph.neighbors(x)) {
    (void)b;
    s = std::min(s, kappa(x, z));
  }
  for (auto [z, b] : graph.neighbors(y)) {
    (void)b;
    s = std::min(s, kappa(y, z));
  }
  wit.s = s;
  if (!(s > 0.0))
    throw std::invalid_argument("metric vanishes on an edge at the chosen pair");

  // The two displayed load inequalities at x and y for a candidate eps.
  auto displays_ok = [&](double eps) {
    for (int u : {x, y}) {
      const int other = u == x ? y : x;
      double acc = 0.0;
      for (auto [z, b] : graph.neighbors(u)) {
        if (z == other) {
          const double v = kappa(u, z) + eps;
          acc += b * v * v;
        } else {
          const double v = kappa(u, z) - s / 3.0;
          acc += b * v * v;
        }
      }
      if (acc > graph.measure(u)) return false;
    }
    return true;
  };

  wit.displays_hold = false;
  double eps = s / 6.0;
  for (int k = 0; k < 60; ++k) {
    if (displays_ok(eps)) {
      wit.displays_hold = true;
      break;
    }
    eps /= 2.0;
  }
  if (!wit.displays_hold) eps = s / 6.0;  // returned for inspection
  wit.epsilon = eps;

  // w on edges: C = both endpoints in {x,y}; D = exactly one endpoint there.
  for (const auto& e : graph.edges()) {
    const bool u_in = e.u == x || e.u == y;
    const bool v_in = e.v == x || e.v == y;
    double val;
    if (u_in && v_in)
      val = kappa(e.u, e.v) + eps;
    else if (u_in || v_in)
      val = kappa(e.u, e.v) - s / 3.0;
    else
      val = kappa(e.u, e.v);
    wit.w.set(e.u, e.v, val);
    wit.w.set(e.v, e.u, val);
  }

  wit.d_w = path_metric(graph, wit.w);
  wit.d_w_xy = wit.d_w(x, y);
  wit.d_w_intrinsic = vertex_loads(graph, wit.d_w, eps_feas).is_intrinsic();
  return wit;
}

}  // namespace gim
