#include "gim/maximal.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gim {

// ---------------------------------------------------------------------------
// ObjectiveWeights

ObjectiveWeights::ObjectiveWeights(int n) : n_(n) {
  if (n <= 1) throw std::invalid_argument("objective needs at least 2 vertices");
  w_.assign(static_cast<size_t>(n) * static_cast<size_t>(n - 1) / 2, 1.0);
}

ObjectiveWeights ObjectiveWeights::uniform(int n) { return ObjectiveWeights(n); }

ObjectiveWeights ObjectiveWeights::concentrated(int n, int x, int y,
                                                double base) {
  if (!(base > 0.0)) throw std::invalid_argument("weights must be positive");
  ObjectiveWeights c(n);
  for (size_t k = 0; k < c.w_.size(); ++k) c.w_[k] = base;
  c.set(x, y, 1.0);
  return c;
}

namespace {
size_t pair_index(int n, int i, int j) {
  if (i > j) std::swap(i, j);
  if (i < 0 || j >= n || i == j) throw std::out_of_range("bad pair");
  return static_cast<size_t>(i) * static_cast<size_t>(n) -
         static_cast<size_t>(i) * static_cast<size_t>(i + 1) / 2 +
         static_cast<size_t>(j - i - 1);
}
}  // namespace

double ObjectiveWeights::at(int i, int j) const {
  return w_[pair_index(n_, i, j)];
}

void ObjectiveWeights::set(int i, int j, double w) {
  if (!(w > 0.0)) throw std::invalid_argument("weights must be positive");
  w_[pair_index(n_, i, j)] = w;
}

// ---------------------------------------------------------------------------
// Barrier core: maximize obj.x subject to constraints
//   slack_k(x) = c0 + sum coef*x_i - sum w*x_j^2 > 0.
// Covers floors, caps and triangle rows (pure linear) as well as the
// per-vertex intrinsic constraints (diagonal quadratic).

namespace {

struct LinTerm {
  int var;
  double coef;
};

struct Constraint {
  double c0 = 0.0;
  std::vector<LinTerm> lin;
  std::vector<std::pair<int, double>> sq;  // (var, w) with slack -= w*x^2

  double slack(const Eigen::VectorXd& x) const {
    double s = c0;
    for (const auto& t : lin) s += t.coef * x[t.var];
    for (const auto& [v, w] : sq) s -= w * x[v] * x[v];
    return s;
  }
};

struct BarrierResult {
  Eigen::VectorXd x;
  int newton_steps = 0;
  double final_t = 1.0;
  double centered_t = 0.0;  // largest t whose centering finished cleanly
  bool stalled = false;
};

// Minimizes -t*obj.x - sum log slack_k over a geometric t schedule. start
// must be strictly feasible. When early_exit_var >= 0, returns as soon as
// x[early_exit_var] > early_exit_level (phase-I use).
BarrierResult run_barrier(int nvars, const Eigen::VectorXd& obj,
                          const std::vector<Constraint>& cons,
                          Eigen::VectorXd start, double tol_gap, int max_outer,
                          int max_newton, int early_exit_var = -1,
                          double early_exit_level = 0.0) {
  BarrierResult out;
  out.x = std::move(start);
  const int m = static_cast<int>(cons.size());

  double t = 1.0;
  for (int outer = 0; outer < max_outer; ++outer) {
    bool centered = false;
    for (int it = 0; it < max_newton; ++it) {
      if (early_exit_var >= 0 && out.x[early_exit_var] > early_exit_level)
        return out;

      Eigen::VectorXd grad = -t * obj;
      Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(nvars, nvars);
      bool ok = true;
      std::vector<double> slacks(cons.size());
      for (size_t k = 0; k < cons.size(); ++k) {
        slacks[k] = cons[k].slack(out.x);
        if (!(slacks[k] > 0.0)) ok = false;
      }
      if (!ok) {
        out.stalled = true;
        return out;
      }
      for (size_t k = 0; k < cons.size(); ++k) {
        const auto& c = cons[k];
        const double s = slacks[k];
        Eigen::VectorXd gs = Eigen::VectorXd::Zero(nvars);
        for (const auto& tm : c.lin) gs[tm.var] += tm.coef;
        for (const auto& [v, w] : c.sq) gs[v] -= 2.0 * w * out.x[v];
        grad -= gs / s;
        hess += gs * gs.transpose() / (s * s);
        for (const auto& [v, w] : c.sq) hess(v, v) += 2.0 * w / s;
      }

      Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
      Eigen::VectorXd step = -ldlt.solve(grad);
      if (ldlt.info() != Eigen::Success || !step.allFinite()) {
        hess.diagonal().array() +=
            1e-12 * (1.0 + hess.diagonal().cwiseAbs().maxCoeff());
        step = -hess.ldlt().solve(grad);
        if (!step.allFinite()) {
          out.stalled = true;
          return out;
        }
      }
      ++out.newton_steps;
      const double decrement2 = -grad.dot(step);
      if (decrement2 <= 1e-13) {
        centered = true;
        break;
      }

      double alpha_max = std::numeric_limits<double>::infinity();
      for (size_t k = 0; k < cons.size(); ++k) {
        const auto& c = cons[k];
        double A = 0.0, B = 0.0;
        for (const auto& tm : c.lin) A += tm.coef * step[tm.var];
        for (const auto& [v, w] : c.sq) {
          A -= 2.0 * w * out.x[v] * step[v];
          B += w * step[v] * step[v];
        }
        // slack(alpha) = s + A*alpha - B*alpha^2 must stay positive
        double amax;
        if (B <= 0.0) {
          amax = A < 0.0 ? slacks[k] / (-A)
                         : std::numeric_limits<double>::infinity();
        } else {
          amax = (A + std::sqrt(A * A + 4.0 * B * slacks[k])) / (2.0 * B);
        }
        alpha_max = std::min(alpha_max, amax);
      }
      double alpha = std::min(1.0, 0.95 * alpha_max);

      auto phi = [&](const Eigen::VectorXd& x) {
        double val = -t * obj.dot(x);
        for (const auto& c : cons) {
          const double s = c.slack(x);
          if (!(s > 0.0)) return std::numeric_limits<double>::infinity();
          val -= std::log(s);
        }
        return val;
      };
      const double phi0 = phi(out.x);
      const double slope = grad.dot(step);
      int bt = 0;
      while (bt < 70 &&
             phi(out.x + alpha * step) > phi0 + 0.25 * alpha * slope) {
        alpha *= 0.5;
        ++bt;
      }
      if (bt >= 70 || alpha * step.norm() < 1e-16) {
        // Progress below the float noise of phi: with a Newton decrement this
        // small the point is inside the quadratic centering zone, which is
        // all the gap estimate needs.
        if (decrement2 <= 1e-6) {
          centered = true;
        } else {
          out.stalled = true;
        }
        break;
      }
      out.x += alpha * step;
    }
    out.final_t = t;
    if (centered) out.centered_t = t;
    if (static_cast<double>(m) / t <= tol_gap || out.stalled) break;
    t = std::min(t * 10.0, static_cast<double>(m) / (0.8 * tol_gap));
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// maximal_metric

namespace {

struct PairSpace {
  int n = 0;
  int P = 0;
  std::vector<std::pair<int, int>> pairs;  // index -> (i,j), i < j

  explicit PairSpace(int nn) : n(nn), P(nn * (nn - 1) / 2) {
    pairs.reserve(static_cast<size_t>(P));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) pairs.push_back({i, j});
  }
  size_t idx(int i, int j) const { return pair_index(n, i, j); }
};

double triangle_cap(const PseudoMetric& q, int i, int j) {
  double cap = kInfDistance;
  for (int z = 0; z < q.size(); ++z) {
    if (z == i || z == j) continue;
    cap = std::min(cap, q(i, z) + q(z, j));
  }
  return cap;
}

// Largest feasible value for entry (i,j) given the rest of the table.
double entry_cap(const WeightedGraph& g, const PseudoMetric& q,
                 const PseudoMetric& ub, int i, int j) {
  double cap = std::min(ub(i, j), triangle_cap(q, i, j));
  const double b = g.edge_weight(i, j);
  if (b > 0.0) {
    for (int end : {i, j}) {
      int other = end == i ? j : i;
      double used = 0.0;
      for (auto [z, bz] : g.neighbors(end)) {
        if (z == other) continue;
        used += bz * q(end, z) * q(end, z);
      }
      const double rem = g.measure(end) - used;
      cap = std::min(cap, rem > 0.0 ? std::sqrt(rem / b) : 0.0);
    }
  }
  return cap;
}

}  // namespace

MaximalResult maximal_metric(const MaximalMetricProblem& problem) {
  const WeightedGraph& g = problem.graph;
  const int n = g.vertex_count();
  if (problem.floor_metric.size() != n || problem.objective.size() != n)
    throw std::invalid_argument("shape mismatch");
  if (!components(g).connected())
    throw std::invalid_argument("maximal_metric requires a connected graph");
  {
    auto loads = vertex_loads(g, problem.floor_metric, problem.eps_feas);
    if (!loads.is_intrinsic())
      throw std::invalid_argument("floor metric is not intrinsic (load " +
                                  std::to_string(loads.max_load) +
                                  " at vertex " +
                                  std::to_string(loads.worst_vertex) + ")");
    if (problem.floor_metric.check_triangles(kDefaultTauTri))
      throw std::invalid_argument("floor violates the triangle inequality");
  }

  const PairSpace ps(n);
  const PseudoMetric& lo = problem.floor_metric;
  const SolverOptions& opt = problem.options;

  MaximalResult result{PseudoMetric(n), {}, {}, false, 0, 0};

  // Static upper bounds: d_s, tightened by single-edge budget residuals over
  // the floor, then triangle-closed.
  PseudoMetric ub = universal_bound_metric(g);
  for (const auto& e : g.edges()) {
    for (int end : {e.u, e.v}) {
      double used = 0.0;
      for (auto [z, bz] : g.neighbors(end)) {
        int other = end == e.u ? e.v : e.u;
        if (z == other) continue;
        used += bz * lo(end, z) * lo(end, z);
      }
      const double rem = std::max(0.0, g.measure(end) - used);
      const double cap = std::max(lo(e.u, e.v), std::sqrt(rem / e.b));
      if (cap < ub(e.u, e.v)) ub.set(e.u, e.v, cap);
    }
  }
  ub.close_triangles();
  for (int p = 0; p < ps.P; ++p) {
    auto [i, j] = ps.pairs[static_cast<size_t>(p)];
    if (ub(i, j) < lo(i, j)) ub.set(i, j, lo(i, j));
  }

  const double scale = std::max(1.0, ub.max_finite_entry());

  // Presolve: pin entries that no feasible point can move. A vertex whose
  // floor load is already 1 forces all its edge entries to the floor; an
  // entry whose closed upper bound meets the floor is sandwiched.
  std::vector<bool> pinned(static_cast<size_t>(ps.P), false);
  {
    bool changed = true;
    while (changed) {
      changed = false;
      auto loads = vertex_loads(g, lo, problem.eps_feas);
      for (int v = 0; v < n; ++v) {
        if (loads.load[static_cast<size_t>(v)] < 1.0 - 1e-11) continue;
        for (auto [z, bz] : g.neighbors(v)) {
          (void)bz;
          size_t p = ps.idx(v, z);
          if (!pinned[p]) {
            pinned[p] = true;
            changed = true;
          }
        }
      }
      for (int p = 0; p < ps.P; ++p) {
        auto [i, j] = ps.pairs[static_cast<size_t>(p)];
        if (pinned[static_cast<size_t>(p)]) {
          if (ub(i, j) != lo(i, j)) {
            ub.set(i, j, lo(i, j));
            changed = true;
          }
        }
      }
      if (changed) ub.close_triangles();
      for (int p = 0; p < ps.P; ++p) {
        auto [i, j] = ps.pairs[static_cast<size_t>(p)];
        if (!pinned[static_cast<size_t>(p)] &&
            ub(i, j) <= lo(i, j) * (1.0 + 1e-11) + 1e-14 * scale) {
          pinned[static_cast<size_t>(p)] = true;
          ub.set(i, j, lo(i, j));
          changed = true;
        }
      }
    }
  }

  std::vector<int> free_of_pair(static_cast<size_t>(ps.P), -1);
  std::vector<int> pair_of_free;
  for (int p = 0; p < ps.P; ++p) {
    if (!pinned[static_cast<size_t>(p)]) {
      free_of_pair[static_cast<size_t>(p)] = static_cast<int>(pair_of_free.size());
      pair_of_free.push_back(p);
    }
  }
  const int F = static_cast<int>(pair_of_free.size());
  result.pinned_pairs = ps.P - F;

  PseudoMetric q(n);
  for (int p = 0; p < ps.P; ++p) {
    auto [i, j] = ps.pairs[static_cast<size_t>(p)];
    q.set(i, j, lo(i, j));
  }

  SolverReport& rep = result.report;
  bool solver_ok = true;

  if (F > 0) {
    // fv: value of pair p under the free-variable vector x.
    auto fv = [&](const Eigen::VectorXd& x, int p) {
      int f = free_of_pair[static_cast<size_t>(p)];
      auto [i, j] = ps.pairs[static_cast<size_t>(p)];
      return f >= 0 ? x[f] : lo(i, j);
    };

    Eigen::VectorXd cvec(F);
    for (int f = 0; f < F; ++f) {
      auto [i, j] = ps.pairs[static_cast<size_t>(pair_of_free[static_cast<size_t>(f)])];
      cvec[f] = problem.objective.at(i, j);
    }

    // Constraint rows: floors, caps, per-vertex budgets, and the triangle
    // rows whose left side is free. Rows with a pinned left side hold
    // automatically (free entries only grow from a triangle-valid floor), and
    // all-pinned paths are already folded into the closed caps. At this scale
    // taking every row up front beats separation rounds: re-solving from a
    // fresh interior point after each addition is where the barrier loses.
    std::vector<Constraint> cons;
    int triangle_rows = 0;
    for (int f = 0; f < F; ++f) {
      auto [i, j] = ps.pairs[static_cast<size_t>(pair_of_free[static_cast<size_t>(f)])];
      cons.push_back({-lo(i, j), {{f, 1.0}}, {}});  // floor
      cons.push_back({ub(i, j), {{f, -1.0}}, {}});  // cap
    }
    for (int v = 0; v < n; ++v) {
      Constraint c;
      c.c0 = g.measure(v);
      bool any_free = false;
      for (auto [z, bz] : g.neighbors(v)) {
        int p = static_cast<int>(ps.idx(v, z));
        int f = free_of_pair[static_cast<size_t>(p)];
        if (f >= 0) {
          c.sq.push_back({f, bz});
          any_free = true;
        } else {
          c.c0 -= bz * lo(v, z) * lo(v, z);
        }
      }
      if (any_free) cons.push_back(std::move(c));
    }
    for (int f = 0; f < F; ++f) {
      auto [i, j] = ps.pairs[static_cast<size_t>(pair_of_free[static_cast<size_t>(f)])];
      for (int z = 0; z < n; ++z) {
        if (z == i || z == j) continue;
        const int piz = static_cast<int>(ps.idx(i, z));
        const int pzj = static_cast<int>(ps.idx(z, j));
        const int fiz = free_of_pair[static_cast<size_t>(piz)];
        const int fzj = free_of_pair[static_cast<size_t>(pzj)];
        if (fiz < 0 && fzj < 0) continue;  // constant cap, inside ub closure
        Constraint c;
        c.lin.push_back({f, -1.0});
        if (fiz >= 0)
          c.lin.push_back({fiz, 1.0});
        else
          c.c0 += lo(i, z);
        if (fzj >= 0)
          c.lin.push_back({fzj, 1.0});
        else
          c.c0 += lo(z, j);
        cons.push_back(std::move(c));
        ++triangle_rows;
      }
    }
    result.active_triangles = triangle_rows;

    // Phase-I: maximize the uniform slack margin sigma. Its optimum (or the
    // early exit once the margin is comfortable) is the interior start.
    Eigen::VectorXd x0(F);
    bool have_start = false;
    {
      std::vector<Constraint> p1 = cons;
      for (auto& c : p1) c.lin.push_back({F, -1.0});
      p1.push_back({2.0 * scale, {{F, -1.0}}, {}});  // sigma cap
      Eigen::VectorXd y0(F + 1);
      for (int f = 0; f < F; ++f) {
        auto [i, j] =
            ps.pairs[static_cast<size_t>(pair_of_free[static_cast<size_t>(f)])];
        y0[f] = lo(i, j) + 0.25 * (ub(i, j) - lo(i, j));
      }
      double worst = std::numeric_limits<double>::infinity();
      for (const auto& c : cons) worst = std::min(worst, c.slack(y0.head(F)));
      y0[F] = worst - std::max(1.0, std::abs(worst));
      Eigen::VectorXd pobj = Eigen::VectorXd::Zero(F + 1);
      pobj[F] = 1.0;
      BarrierResult p1res =
          run_barrier(F + 1, pobj, p1, y0, 1e-9 * scale, opt.max_outer,
                      opt.max_newton, F, 1e-3 * scale);
      if (p1res.x[F] > 1e-11 * scale) {
        x0 = p1res.x.head(F);
        have_start = true;
      }
    }

    if (!have_start) {
      // Degenerate face the presolve did not eliminate; fall back to the
      // floor and let the sweeps push along the face.
      solver_ok = false;
      rep.note = "empty interior after presolve; sweeps only";
    } else {
      BarrierResult br = run_barrier(F, cvec, cons, x0, opt.tol_solve,
                                     opt.max_outer, opt.max_newton);
      rep.iterations += br.newton_steps;
      // A stall after the last cleanly centered stage still leaves a valid
      // approximate-centering gap estimate from that stage.
      if (br.centered_t > 0.0) {
        rep.gap_bound = static_cast<double>(cons.size()) / br.centered_t;
      } else {
        solver_ok = false;
        rep.note = "barrier made no centered stage";
      }
      if (br.stalled && rep.note.empty())
        rep.note = "barrier stalled after t = " + std::to_string(br.centered_t);

      for (int f = 0; f < F; ++f) {
        auto [i, j] =
            ps.pairs[static_cast<size_t>(pair_of_free[static_cast<size_t>(f)])];
        q.set(i, j, fv(br.x, static_cast<int>(ps.idx(i, j))));
      }
    }
  }

  // Saturation sweeps: raise every entry to its exact cap given the others.
  // Order: descending objective weight, then pair index. Monotone, keeps all
  // constraints satisfied, and lands entries exactly on binding constraints.
  {
    std::vector<int> order(static_cast<size_t>(ps.P));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      auto [ai, aj] = ps.pairs[static_cast<size_t>(a)];
      auto [bi, bj] = ps.pairs[static_cast<size_t>(b)];
      return problem.objective.at(ai, aj) > problem.objective.at(bi, bj);
    });
    for (int pass = 0; pass < 500; ++pass) {
      double moved = 0.0;
      for (int p : order) {
        auto [i, j] = ps.pairs[static_cast<size_t>(p)];
        const double cap = entry_cap(g, q, ub, i, j);
        if (cap > q(i, j)) {
          moved = std::max(moved, cap - q(i, j));
          q.set(i, j, cap);
        }
      }
      if (moved < 1e-13 * scale) break;
    }
  }

  // Certificates.
  result.certificates.clear();
  bool all_passed = true;
  for (int p = 0; p < ps.P; ++p) {
    auto [i, j] = ps.pairs[static_cast<size_t>(p)];
    PairCertificate cert;
    cert.i = i;
    cert.j = j;
    const double tcap = triangle_cap(q, i, j);
    cert.triangle_dominated = q(i, j) >= tcap - 1e-9 * scale;
    if (!cert.triangle_dominated) {
      const double bumped = std::min(q(i, j) + problem.delta_cert, tcap);
      if (bumped <= q(i, j) + 0.01 * problem.delta_cert) {
        cert.triangle_dominated = true;  // closure re-tightens the bump away
      } else {
        PseudoMetric trial = q;
        trial.set(i, j, bumped);
        auto loads = vertex_loads(g, trial, problem.eps_feas);
        cert.bump_infeasible =
            !loads.is_intrinsic() || bumped > ub(i, j) + 1e-12 * scale;
      }
    }
    all_passed = all_passed && cert.passed();
    result.certificates.push_back(cert);
  }
  result.certificate_passed = all_passed;

  // Final diagnostics.
  double objective_value = 0.0;
  for (int p = 0; p < ps.P; ++p) {
    auto [i, j] = ps.pairs[static_cast<size_t>(p)];
    objective_value += problem.objective.at(i, j) * q(i, j);
  }
  rep.value = objective_value;
  {
    auto loads = vertex_loads(g, q, problem.eps_feas);
    rep.max_violation = std::max(0.0, loads.max_load - 1.0);
    if (auto tv = q.check_triangles(kDefaultTauTri))
      rep.max_violation = std::max(rep.max_violation, tv->violation);
    for (int p = 0; p < ps.P; ++p) {
      auto [i, j] = ps.pairs[static_cast<size_t>(p)];
      rep.max_violation = std::max(rep.max_violation, lo(i, j) - q(i, j));
    }
  }
  rep.stationarity = rep.gap_bound;  // barrier certificate carries the KKT gap
  rep.converged = solver_ok && rep.max_violation <= opt.tol_solve &&
                  (F == 0 || rep.gap_bound <= opt.tol_solve * 10.0);
  if (F == 0) {
    rep.converged = true;
    rep.gap_bound = 0.0;
    rep.note = "floor is the unique feasible metric (fully pinned)";
  }

  result.metric = q;
  return result;
}

MaximalResult maximal_metric(const WeightedGraph& graph,
                             const PseudoMetric& floor_metric,
                             const ObjectiveWeights& objective,
                             SolverOptions options) {
  return maximal_metric(
      MaximalMetricProblem{graph, floor_metric, objective, options});
}

}  // namespace gim
