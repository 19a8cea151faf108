#include "gim/star.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gim {

namespace {

// Exact check of sum_{x in comp, x != p} m(x) <= m(p). Doubles are rationals,
// so the comparison has no rounding at boundary cases.
bool measure_condition_exact(const WeightedGraph& g,
                             const std::vector<int>& comp, int p) {
  mpq_class sum = 0;
  for (int v : comp) {
    if (v == p) continue;
    sum += mpq_class(g.measure(v));
  }
  return sum <= mpq_class(g.measure(p));
}

ComponentStarInfo classify_component(const WeightedGraph& g,
                                     const std::vector<int>& comp) {
  ComponentStarInfo info;
  std::vector<int> high;  // vertices with N >= 2
  for (int v : comp)
    if (g.neighbor_count(v) >= 2) high.push_back(v);
  if (high.size() > 1) return info;  // not a star
  info.is_star = true;
  if (comp.size() == 1) {
    info.centers = {comp.front()};
  } else if (comp.size() == 2) {
    info.centers = {comp[0], comp[1]};
    std::sort(info.centers.begin(), info.centers.end());
  } else {
    if (high.empty()) {  // cannot happen for a connected component of size >= 3
      info.is_star = false;
      return info;
    }
    info.centers = {high.front()};
  }
  for (int p : info.centers)
    info.measure_condition.push_back(measure_condition_exact(g, comp, p));
  return info;
}

}  // namespace

StarClassification classify_star(const WeightedGraph& graph) {
  StarClassification out;
  auto cs = components(graph);
  out.connected = cs.connected();
  auto comps = cs.members();
  out.is_galaxy = true;
  for (const auto& comp : comps) {
    auto info = classify_component(graph, comp);
    out.is_galaxy = out.is_galaxy && info.is_star;
    out.component_info.push_back(std::move(info));
  }
  if (out.connected && out.component_info.front().is_star) {
    out.is_star = true;
    out.centers = out.component_info.front().centers;
    out.measure_condition = out.component_info.front().measure_condition;
  }
  return out;
}

StarKappa star_kappa_closed_form(const WeightedGraph& graph, int center) {
  auto cls = classify_star(graph);
  if (!cls.is_star ||
      std::find(cls.centers.begin(), cls.centers.end(), center) ==
          cls.centers.end())
    throw std::invalid_argument("graph is not a star with the given center");

  const int n = graph.vertex_count();
  StarKappa out{PseudoMetric(n), true};
  const double mp = graph.measure(center);

  auto leaf_center = [&](int x) {
    const double b = graph.edge_weight(x, center);
    return std::sqrt(std::min(graph.measure(x), mp) / b);
  };

  for (int x = 0; x < n; ++x) {
    if (x == center) continue;
    out.metric.set(x, center, leaf_center(x));
  }

  // Leaf-leaf entries: maximize u+v over b_x u^2 + b_y v^2 <= m(p),
  // 0 <= u <= sqrt(m(x)/b_x), 0 <= v <= sqrt(m(y)/b_y). Candidates: the
  // ellipse tangent point and the two one-sided clamps.
  for (int x = 0; x < n; ++x) {
    for (int y = x + 1; y < n; ++y) {
      if (x == center || y == center) continue;
      const double bx = graph.edge_weight(x, center);
      const double by = graph.edge_weight(y, center);
      const double ax = std::sqrt(graph.measure(x) / bx);
      const double ay = std::sqrt(graph.measure(y) / by);
      double best = 0.0;
      {
        const double T = std::sqrt(mp / (1.0 / bx + 1.0 / by));
        const double u = T / bx, v = T / by;
        if (u <= ax && v <= ay)
          best = std::max(best, std::sqrt(mp * (1.0 / bx + 1.0 / by)));
      }
      {
        const double u = std::min(ax, std::sqrt(mp / bx));
        const double rem = std::max(0.0, mp - bx * u * u);
        best = std::max(best, u + std::min(ay, std::sqrt(rem / by)));
      }
      {
        const double v = std::min(ay, std::sqrt(mp / by));
        const double rem = std::max(0.0, mp - by * v * v);
        best = std::max(best, v + std::min(ax, std::sqrt(rem / bx)));
      }
      out.metric.set(x, y, best);
    }
  }
  return out;
}

LargestMetricDecision largest_metric_decision(const WeightedGraph& graph) {
  LargestMetricDecision out;
  out.classification = classify_star(graph);
  const auto& cls = out.classification;

  if (cls.connected) {
    if (!cls.is_star) {
      out.exists_largest = false;
      out.reason = "not a star graph";
      return out;
    }
    if (!cls.any_center_satisfies()) {
      out.exists_largest = false;
      out.reason = "star, but no center satisfies the measure condition";
      return out;
    }
    out.exists_largest = true;
    out.reason = "star graph with a compliant center";
    return out;
  }

  // Galaxy variant: every component must be a star whose condition holds.
  if (!cls.is_galaxy) {
    out.exists_largest = false;
    out.reason = "disconnected and not a galaxy";
    return out;
  }
  for (size_t k = 0; k < cls.component_info.size(); ++k) {
    const auto& info = cls.component_info[k];
    bool any = false;
    for (bool c : info.measure_condition) any = any || c;
    if (!any) {
      out.exists_largest = false;
      out.reason = "galaxy, but component " + std::to_string(k) +
                   " violates the measure condition";
      return out;
    }
  }
  out.exists_largest = true;
  out.reason = "galaxy with the measure condition on every star";
  return out;
}

}  // namespace gim
