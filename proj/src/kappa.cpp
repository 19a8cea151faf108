#include "gim/kappa.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <thread>

namespace gim {

namespace {

// Reduced coordinates: f over all vertices except y (gauge f(y) = 0). The
// constant direction is removed, so the barrier Hessian is positive definite
// on connected graphs.
struct ReducedIndex {
  int n;
  int y;
  int dim() const { return n - 1; }
  int pos(int v) const { return v < y ? v : v - 1; }  // v != y
};

struct ConstraintEval {
  Eigen::VectorXd slack;     // s_v = m(v) - sum b (f_v - f_z)^2, must stay > 0
  bool feasible = true;
};

ConstraintEval eval_slacks(const WeightedGraph& g, const ReducedIndex& ri,
                           const Eigen::VectorXd& u) {
  const int n = g.vertex_count();
  auto fval = [&](int v) { return v == ri.y ? 0.0 : u[ri.pos(v)]; };
  ConstraintEval out;
  out.slack.resize(n);
  for (int v = 0; v < n; ++v) {
    double q = 0.0;
    for (auto [z, b] : g.neighbors(v)) {
      const double d = fval(v) - fval(z);
      q += b * d * d;
    }
    out.slack[v] = g.measure(v) - q;
    if (!(out.slack[v] > 0.0)) out.feasible = false;
  }
  return out;
}

}  // namespace

KappaResult kappa_pair(const KappaProblem& problem) {
  const WeightedGraph& g = problem.graph;
  const int n = g.vertex_count();
  const int x = problem.x, y = problem.y;
  if (x < 0 || x >= n || y < 0 || y >= n)
    throw std::out_of_range("vertex index out of range");
  if (x == y) throw std::invalid_argument("kappa_pair needs x != y");
  if (!components(g).connected())
    throw std::invalid_argument(
        "kappa is infinite across components; graph must be connected");

  const SolverOptions& opt = problem.options;
  const ReducedIndex ri{n, y, };
  const int dim = ri.dim();
  const int ncons = n;

  Eigen::VectorXd u = Eigen::VectorXd::Zero(dim);  // f = 0 is strictly feasible
  auto fval = [&](const Eigen::VectorXd& uu, int v) {
    return v == y ? 0.0 : uu[ri.pos(v)];
  };

  KappaResult result;
  SolverReport& rep = result.report;

  double t = 1.0;
  bool stalled = false;
  double best_dual = std::numeric_limits<double>::infinity();
  double best_defect = std::numeric_limits<double>::infinity();
  for (int outer = 0; outer < opt.max_outer; ++outer) {
    // Center for the current barrier parameter.
    for (int it = 0; it < opt.max_newton; ++it) {
      ConstraintEval ce = eval_slacks(g, ri, u);
      // gradient of phi_t = -t*u_x - sum log s_v
      Eigen::VectorXd grad = Eigen::VectorXd::Zero(dim);
      grad[ri.pos(x)] = -t;
      Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(dim, dim);
      // per-vertex constraint gradients
      Eigen::MatrixXd cgrad = Eigen::MatrixXd::Zero(n, dim);
      for (const auto& e : g.edges()) {
        const double d = fval(u, e.u) - fval(u, e.v);
        const double c = 2.0 * e.b * d;
        if (e.u != y) {
          cgrad(e.u, ri.pos(e.u)) += c;
          cgrad(e.v, ri.pos(e.u)) += c;
        }
        if (e.v != y) {
          cgrad(e.u, ri.pos(e.v)) -= c;
          cgrad(e.v, ri.pos(e.v)) -= c;
        }
        // constant Hessian of g_u and g_v: 2b (e_u - e_v)(e_u - e_v)^T each
        const double hcoef =
            2.0 * e.b * (1.0 / ce.slack[e.u] + 1.0 / ce.slack[e.v]);
        if (e.u != y && e.v != y) {
          const int a = ri.pos(e.u), c2 = ri.pos(e.v);
          hess(a, a) += hcoef;
          hess(c2, c2) += hcoef;
          hess(a, c2) -= hcoef;
          hess(c2, a) -= hcoef;
        } else {
          const int a = ri.pos(e.u == y ? e.v : e.u);
          hess(a, a) += hcoef;
        }
      }
      for (int v = 0; v < n; ++v) {
        grad += cgrad.row(v).transpose() / ce.slack[v];
        hess += cgrad.row(v).transpose() * cgrad.row(v) /
                (ce.slack[v] * ce.slack[v]);
      }

      Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
      Eigen::VectorXd step = -ldlt.solve(grad);
      if (ldlt.info() != Eigen::Success || !step.allFinite()) {
        hess.diagonal().array() += 1e-12 * (1.0 + hess.diagonal().maxCoeff());
        step = -hess.ldlt().solve(grad);
      }
      const double decrement2 = -grad.dot(step);
      ++rep.iterations;
      if (decrement2 <= 1e-13) break;

      // Largest step keeping every slack strictly positive.
      double alpha_max = std::numeric_limits<double>::infinity();
      for (int v = 0; v < n; ++v) {
        double p = 0.0, q = 0.0;
        for (auto [z, b] : g.neighbors(v)) {
          const double d = fval(u, v) - fval(u, z);
          const double dd = (v == y ? 0.0 : step[ri.pos(v)]) -
                            (z == y ? 0.0 : step[ri.pos(z)]);
          p += 2.0 * b * d * dd;
          q += b * dd * dd;
        }
        // need q a^2 + p a - s_v < 0
        double amax;
        if (q <= 0.0) {
          amax = p > 0.0 ? ce.slack[v] / p
                         : std::numeric_limits<double>::infinity();
        } else {
          amax = (-p + std::sqrt(p * p + 4.0 * q * ce.slack[v])) / (2.0 * q);
        }
        alpha_max = std::min(alpha_max, amax);
      }
      double alpha = std::min(1.0, 0.95 * alpha_max);

      // Armijo backtracking on phi_t.
      auto phi = [&](const Eigen::VectorXd& uu) {
        ConstraintEval c = eval_slacks(g, ri, uu);
        if (!c.feasible) return std::numeric_limits<double>::infinity();
        double val = -t * uu[ri.pos(x)];
        for (int v = 0; v < n; ++v) val -= std::log(c.slack[v]);
        return val;
      };
      const double phi0 = phi(u);
      const double slope = grad.dot(step);
      int bt = 0;
      while (bt < 70 && phi(u + alpha * step) > phi0 + 0.25 * alpha * slope) {
        alpha *= 0.5;
        ++bt;
      }
      if (bt >= 70 || alpha * step.norm() < 1e-16) {
        // Below the float noise of phi; with a tiny Newton decrement the
        // point is centered as far as the certificates are concerned.
        if (decrement2 > 1e-6) stalled = true;
        break;
      }
      u += alpha * step;
    }

    // Certified optimality via the explicit dual bound: with lambda_v =
    // 1/(t s_v) >= 0 and Q = sum lambda_v A_v (A_v the constraint Hessian/2),
    //   kappa <= U(lambda) = (1/4) c^T Q^{-1} c + sum lambda_v m(v).
    // Valid for any nonnegative lambda, so the best bound across stages
    // stands regardless of centering quality; the stopping rule is the
    // certificate itself, not the central-path proxy ncons/t.
    {
      ConstraintEval ce = eval_slacks(g, ri, u);
      Eigen::VectorXd lambda(n);
      for (int v = 0; v < n; ++v) lambda[v] = 1.0 / (t * ce.slack[v]);
      Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(dim, dim);
      for (const auto& e : g.edges()) {
        const double w = e.b * (lambda[e.u] + lambda[e.v]);
        if (e.u != y && e.v != y) {
          const int a = ri.pos(e.u), c2 = ri.pos(e.v);
          Q(a, a) += w;
          Q(c2, c2) += w;
          Q(a, c2) -= w;
          Q(c2, a) -= w;
        } else {
          const int a = ri.pos(e.u == y ? e.v : e.u);
          Q(a, a) += w;
        }
      }
      Eigen::VectorXd c = Eigen::VectorXd::Zero(dim);
      c[ri.pos(x)] = 1.0;
      Eigen::VectorXd qinv_c = Q.ldlt().solve(c);
      const double dual_bound =
          0.25 * c.dot(qinv_c) + lambda.dot(Eigen::Map<const Eigen::VectorXd>(
                                     g.measures().data(), n));
      best_dual = std::min(best_dual, dual_bound);
      double lagrangian = u[ri.pos(x)];
      for (int v = 0; v < n; ++v) lagrangian += lambda[v] * ce.slack[v];
      best_defect = std::min(best_defect,
                             std::max(0.0, dual_bound - lagrangian));
    }
    if (best_dual - u[ri.pos(x)] <= 0.5 * opt.tol_solve || stalled) break;
    // Do not overshoot the barrier parameter: conditioning grows with t.
    t = std::min(t * 10.0, static_cast<double>(ncons) / (0.2 * opt.tol_solve));
  }

  ConstraintEval ce = eval_slacks(g, ri, u);
  rep.max_violation = 0.0;
  for (int v = 0; v < n; ++v)
    rep.max_violation = std::max(rep.max_violation, -ce.slack[v]);
  rep.gap_bound = std::max(0.0, best_dual - u[ri.pos(x)]);
  rep.stationarity = best_defect;
  // The dual bound is valid for any lambda >= 0, so convergence is decided by
  // the certificates alone; a line-search stall in the last polish stage does
  // not matter once they hold.
  rep.converged = rep.gap_bound <= opt.tol_solve &&
                  rep.max_violation <= opt.tol_solve &&
                  rep.stationarity <= opt.tol_solve;
  if (!rep.converged)
    rep.note = stalled ? "line search stalled; value is a feasible lower bound"
                       : "certificates not met; value is a feasible lower bound";

  result.value = u[ri.pos(x)];
  rep.value = result.value;
  result.witness.assign(static_cast<size_t>(n), 0.0);
  for (int v = 0; v < n; ++v)
    if (v != y) result.witness[static_cast<size_t>(v)] = u[ri.pos(v)];
  return result;
}

KappaResult kappa_pair(const WeightedGraph& graph, int x, int y,
                       SolverOptions options) {
  return kappa_pair(KappaProblem{graph, x, y, options});
}

PseudoMetric kappa_matrix(const WeightedGraph& graph, SolverOptions options,
                          KappaMatrixReport* report, int threads) {
  const int n = graph.vertex_count();
  if (!components(graph).connected())
    throw std::invalid_argument("kappa_matrix requires a connected graph");

  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.push_back({i, j});

  if (threads <= 0)
    threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<int>(threads, std::max<size_t>(pairs.size(), 1));

  std::vector<double> values(pairs.size());
  std::vector<SolverReport> reports(pairs.size());
  auto worker = [&](int id) {
    for (size_t k = static_cast<size_t>(id); k < pairs.size();
         k += static_cast<size_t>(threads)) {
      KappaResult r = kappa_pair(graph, pairs[k].first, pairs[k].second, options);
      values[k] = r.value;
      reports[k] = r.report;
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }

  PseudoMetric table(n);
  KappaMatrixReport local;
  for (size_t k = 0; k < pairs.size(); ++k) {
    table.set(pairs[k].first, pairs[k].second, values[k]);
    ++local.pair_count;
    local.total_iterations += reports[k].iterations;
    local.all_converged = local.all_converged && reports[k].converged;
    local.worst_gap = std::max(local.worst_gap, reports[k].gap_bound);
    if (!reports[k].converged) local.nonconverged_pairs.push_back(pairs[k]);
  }
  if (auto viol = table.check_triangles(kDefaultTauTri))
    local.worst_triangle_excess = viol->violation;
  if (report) *report = local;
  return table;
}

}  // namespace gim
