#ifndef GIM_SOLVER_REPORT_HPP
#define GIM_SOLVER_REPORT_HPP

#include <limits>
#include <string>

namespace gim {

struct SolverOptions {
  double tol_solve = 1e-8;  // target duality gap / certificate tolerance
  int max_outer = 60;       // barrier stages
  int max_newton = 120;     // Newton steps per stage
};

/// Outcome of a convex solve. When converged is false the value is still a
/// valid bound from a feasible iterate (lower bound for maximization).
struct SolverReport {
  double value = 0.0;
  bool converged = false;
  int iterations = 0;        // total Newton steps
  double max_violation = 0.0;  // positive part of the worst constraint
  double stationarity = 0.0;   // KKT residual with barrier multipliers
  double gap_bound = std::numeric_limits<double>::infinity();
  std::string note;
};

}  // namespace gim

#endif  // GIM_SOLVER_REPORT_HPP
