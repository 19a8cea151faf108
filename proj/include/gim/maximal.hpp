#ifndef GIM_MAXIMAL_HPP
#define GIM_MAXIMAL_HPP

#include <string>
#include <vector>

#include "gim/metric_kit.hpp"
#include "gim/pseudo_metric.hpp"
#include "gim/solver_report.hpp"
#include "gim/weighted_graph.hpp"

namespace gim {

/// Strictly positive objective weight per unordered pair. Any positive
/// weighting certifies maximality of the optimum; concentrating weight on one
/// pair steers the solver toward a particular maximal element.
class ObjectiveWeights {
 public:
  static ObjectiveWeights uniform(int n);
  /// Weight 1 on (x,y), base on every other pair.
  static ObjectiveWeights concentrated(int n, int x, int y, double base = 0.01);

  int size() const { return n_; }
  double at(int i, int j) const;
  void set(int i, int j, double w);

 private:
  explicit ObjectiveWeights(int n);
  int n_;
  std::vector<double> w_;
};

struct MaximalMetricProblem {
  const WeightedGraph& graph;
  const PseudoMetric& floor_metric;  // must be intrinsic
  const ObjectiveWeights& objective;
  // The barrier only has to get the objective direction right; the
  // saturation sweeps land entries exactly on their binding constraints, so
  // a looser gap than kappa's suffices.
  SolverOptions options{1e-6, 60, 120};
  double eps_feas = kDefaultEpsFeas;
  double delta_cert = 1e-5;
};

struct PairCertificate {
  int i = 0, j = 0;
  bool triangle_dominated = false;  // entry equals min_z rho(i,z)+rho(z,j)
  bool bump_infeasible = false;     // +delta_cert breaks a load constraint
  bool passed() const { return triangle_dominated || bump_infeasible; }
};

struct MaximalResult {
  PseudoMetric metric;
  SolverReport report;
  std::vector<PairCertificate> certificates;
  bool certificate_passed = false;
  int active_triangles = 0;  // triangle constraints added by the active set
  int pinned_pairs = 0;      // entries fixed at the floor by presolve
};

/// Maximize sum c(x,y) rho(x,y) over intrinsic pseudo metrics rho >= floor.
/// Triangle inequalities are handled by iterative active-set addition; the
/// optimum is polished by saturation sweeps so that every entry sits exactly
/// on a binding constraint, then certified pairwise. Throws when the floor is
/// not intrinsic or the graph is disconnected.
MaximalResult maximal_metric(const MaximalMetricProblem& problem);
MaximalResult maximal_metric(const WeightedGraph& graph,
                             const PseudoMetric& floor_metric,
                             const ObjectiveWeights& objective,
                             SolverOptions options = {1e-6, 60, 120});

}  // namespace gim

#endif  // GIM_MAXIMAL_HPP
