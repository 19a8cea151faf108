#ifndef GIM_PERTURBATION_HPP
#define GIM_PERTURBATION_HPP

#include <optional>

#include "gim/metric_kit.hpp"
#include "gim/pseudo_metric.hpp"
#include "gim/weighted_graph.hpp"

namespace gim {

/// Outcome of the perturbation construction behind the star decision: it
/// manufactures an intrinsic path metric exceeding a given one. Given a metric
/// kappa on a connected non-star graph, picks the edge pair (x,y) with
/// N(x),N(y) >= 2 (y minimizing kappa(x,.) among such neighbors), sets
/// s = min kappa over edges at x and y, and builds the weight
///   w = kappa + eps on (x,y),  kappa - s/3 on other edges at x or y,
///   kappa elsewhere.
/// When some eps in {s/6, s/12, ...} satisfies the two load inequalities the
/// construction requires, d_w is intrinsic and exceeds kappa at (x,y); when
/// no eps does (displays_hold = false), that failure certifies that the input
/// was not intrinsic at x or y to begin with.
struct PerturbationWitness {
  int x = -1;
  int y = -1;
  double s = 0.0;
  double epsilon = 0.0;      // chosen eps, or s/6 when displays_hold is false
  bool displays_hold = false;
  EdgeWeighting w;
  PseudoMetric d_w;
  bool d_w_intrinsic = false;
  double d_w_xy = 0.0;
  double input_xy = 0.0;

  PerturbationWitness() : d_w(1) {}

  /// d_w(x,y) >= kappa(x,y) + eps, the contradiction the proof derives.
  bool exceeds_input() const { return d_w_xy >= input_xy + epsilon - 1e-12; }
};

/// Returns nullopt on star graphs (no edge with N >= 2 on both ends exists).
/// Requires a connected graph and a finite metric table.
std::optional<PerturbationWitness> perturbation_witness(
    const WeightedGraph& graph, const PseudoMetric& kappa,
    double eps_feas = kDefaultEpsFeas);

}  // namespace gim

#endif  // GIM_PERTURBATION_HPP
