#ifndef GIM_STAR_HPP
#define GIM_STAR_HPP

#include <string>
#include <vector>

#include "gim/pseudo_metric.hpp"
#include "gim/weighted_graph.hpp"

namespace gim {

/// Star structure of one connected component.
struct ComponentStarInfo {
  bool is_star = false;
  std::vector<int> centers;             // see center rules below
  std::vector<bool> measure_condition;  // per center, exact rational compare
};

/// A connected graph is a star when every vertex except one center has
/// exactly one neighbor. Centers: the unique high-degree vertex when
/// |X| >= 3, both vertices when |X| = 2, the sole vertex when |X| = 1.
struct StarClassification {
  bool connected = false;
  bool is_star = false;    // connected and star-shaped
  bool is_galaxy = false;  // every component is a star
  std::vector<int> centers;
  std::vector<bool> measure_condition;  // sum_{x != p} m(x) <= m(p), exact
  std::vector<ComponentStarInfo> component_info;

  bool any_center_satisfies() const {
    for (bool c : measure_condition)
      if (c) return true;
    return false;
  }
};

StarClassification classify_star(const WeightedGraph& graph);

struct StarKappa {
  PseudoMetric metric;
  /// Leaf-center entries follow kappa(x,p)^2 = (m(x) ^ m(p)) / b(x,p);
  /// leaf-leaf entries come from the two-variable reduction at the center and
  /// are derived, not a stated closed form.
  bool leaf_leaf_derived = true;
};

/// Closed-form canonical metric on a star with the given center. Throws when
/// classify_star does not report a star with that center.
StarKappa star_kappa_closed_form(const WeightedGraph& graph, int center);

struct LargestMetricDecision {
  bool exists_largest = false;  // equivalently: kappa is intrinsic
  std::string reason;
  StarClassification classification;
};

/// Decision procedure: a largest intrinsic metric exists iff the graph is a
/// star with a center satisfying the measure condition; disconnected inputs
/// use the galaxy variant (every component a compliant star).
LargestMetricDecision largest_metric_decision(const WeightedGraph& graph);

}  // namespace gim

#endif  // GIM_STAR_HPP
