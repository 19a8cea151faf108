#ifndef GIM_KAPPA_HPP
#define GIM_KAPPA_HPP

#include <vector>

#include "gim/metric_kit.hpp"
#include "gim/pseudo_metric.hpp"
#include "gim/solver_report.hpp"
#include "gim/weighted_graph.hpp"

namespace gim {

struct KappaProblem {
  const WeightedGraph& graph;
  int x;
  int y;
  SolverOptions options{};
};

struct KappaResult {
  double value = 0.0;
  std::vector<double> witness;  // f with f(y) = 0, |nabla f| <= 1 strictly
  SolverReport report;
};

/// kappa(x,y) = sup f(x) - f(y) over f with, at every vertex v,
/// sum_z b(v,z)(f(v)-f(z))^2 <= m(v). Solved by a log-barrier interior-point
/// method from the feasible start f = 0; deterministic. Throws on x == y or
/// a disconnected graph.
KappaResult kappa_pair(const KappaProblem& problem);
KappaResult kappa_pair(const WeightedGraph& graph, int x, int y,
                       SolverOptions options = {});

struct KappaMatrixReport {
  bool all_converged = true;
  int pair_count = 0;
  int total_iterations = 0;
  double worst_gap = 0.0;
  double worst_triangle_excess = 0.0;  // post-hoc triangle verification
  std::vector<std::pair<int, int>> nonconverged_pairs;
};

/// Table of kappa_pair over all pairs. Requires a connected graph. Pair
/// solves are independent; threads = 0 uses the hardware concurrency. The
/// table is identical for any thread count.
PseudoMetric kappa_matrix(const WeightedGraph& graph, SolverOptions options = {},
                          KappaMatrixReport* report = nullptr, int threads = 1);

}  // namespace gim

#endif  // GIM_KAPPA_HPP
