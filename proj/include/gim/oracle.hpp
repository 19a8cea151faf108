#ifndef GIM_ORACLE_HPP
#define GIM_ORACLE_HPP

#include <vector>

#include "gim/pseudo_metric.hpp"
#include "gim/weighted_graph.hpp"

namespace gim {

/// Grid layout for the brute-force kappa search. half_range = 0 picks the
/// per-coordinate range from d_s (the universal bound); step = 0 derives the
/// step from points_per_axis.
/// The optimizer often sits where a budget square root has unbounded slope,
/// so lattice error h costs ~sqrt(h) in value; the deep halving schedule is
/// what buys the 1e-3 agreement and each round is only points^(n-2) probes.
struct GridSpec {
  double half_range = 0.0;
  double step = 0.0;
  int points_per_axis = 21;
  int refine_rounds = 18;
};

/// Brute-force lower bound for kappa(x,y): maximum of f(x) - f(y) over grid
/// points f (gauge f(y) = 0) that satisfy the per-vertex constraints with no
/// tolerance slack. Always a valid lower bound; with the default refinement
/// it lands within 1e-3 of the solver on the small fixture set. Requires
/// n <= 6.
double kappa_lower_bound_search(const WeightedGraph& graph, int x, int y,
                                GridSpec spec = {});

/// True iff no single-entry increase by delta_grid, re-closed under triangle
/// inequalities, stays intrinsic. Requires n <= 5.
bool maximality_check_exhaustive(const WeightedGraph& graph,
                                 const PseudoMetric& rho, double delta_grid);

struct ZSegmentResult {
  bool holds = false;
  int failing_vertex = -1;  // interior vertex where the identity breaks
};

/// Checks (f(n+1)-f(n))^2 + (f(n-1)-f(n))^2 = 1 at every interior vertex of a
/// path with b = m = 1. In exact mode the doubles are compared as the
/// rationals they are; otherwise a 1e-12 tolerance absorbs irrational inputs
/// like n/sqrt(2). The graph must be the unit path.
ZSegmentResult z_segment_maximal_family(const WeightedGraph& segment,
                                        const std::vector<double>& f,
                                        bool exact);

}  // namespace gim

#endif  // GIM_ORACLE_HPP
