#include "gim/oracle.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gim/metric_kit.hpp"

namespace gim {

double kappa_lower_bound_search(const WeightedGraph& graph, int x, int y,
                                GridSpec spec) {
  const int n = graph.vertex_count();
  if (n > 6) throw std::invalid_argument("oracle limited to n <= 6");
  if (x == y || x < 0 || y < 0 || x >= n || y >= n)
    throw std::invalid_argument("bad pair");
  if (!components(graph).connected())
    throw std::invalid_argument("oracle requires a connected graph");
  if (spec.points_per_axis < 3)
    throw std::invalid_argument("need at least 3 grid points per axis");

  // Gauge f(y) = 0; the lattice runs over the vertices other than x and y.
  // Per lattice point the objective coordinate f(x) is pushed to its exact
  // per-constraint cap, so only the free coordinates carry lattice error.
  std::vector<int> vars;
  for (int v = 0; v < n; ++v)
    if (v != y && v != x) vars.push_back(v);
  const int dim = static_cast<int>(vars.size());

  // |f(v) - f(y)| <= kappa(v,y) <= d_s(v,y) bounds each coordinate.
  std::vector<double> lo(static_cast<size_t>(dim)), hi(static_cast<size_t>(dim));
  {
    PseudoMetric ds = universal_bound_metric(graph);
    for (int k = 0; k < dim; ++k) {
      const double L = spec.half_range > 0.0 ? spec.half_range
                                             : ds(vars[static_cast<size_t>(k)], y);
      lo[static_cast<size_t>(k)] = -L;
      hi[static_cast<size_t>(k)] = L;
    }
  }

  std::vector<double> f(static_cast<size_t>(n), 0.0);
  auto feasible = [&]() {
    for (int v = 0; v < n; ++v) {
      double acc = 0.0;
      for (auto [z, b] : graph.neighbors(v)) {
        const double d = f[static_cast<size_t>(v)] - f[static_cast<size_t>(z)];
        acc += b * d * d;
      }
      if (acc > graph.measure(v)) return false;
    }
    return true;
  };

  // Largest f(x) allowed by the constraints at x and at its neighbors, with
  // every other coordinate held at the current lattice values; NaN when the
  // lattice point is infeasible on its own.
  auto max_fx = [&]() {
    // every constraint not touching x must already hold at the lattice point
    for (int v = 0; v < n; ++v) {
      if (v == x) continue;
      double acc = 0.0;
      for (auto [z, b] : graph.neighbors(v)) {
        if (z == x) continue;
        const double d = f[static_cast<size_t>(v)] - f[static_cast<size_t>(z)];
        acc += b * d * d;
      }
      if (acc > graph.measure(v))
        return std::numeric_limits<double>::quiet_NaN();
    }
    double cap = std::numeric_limits<double>::infinity();
    for (auto [w, bwx] : graph.neighbors(x)) {
      // (f(x) - f(w))^2 <= (m(w) - rest of w's sum) / b(w,x)
      double acc = 0.0;
      for (auto [z, b] : graph.neighbors(w)) {
        if (z == x) continue;
        const double d = f[static_cast<size_t>(w)] - f[static_cast<size_t>(z)];
        acc += b * d * d;
      }
      const double rest = graph.measure(w) - acc;
      cap = std::min(cap, f[static_cast<size_t>(w)] + std::sqrt(rest / bwx));
    }
    // constraint at x itself: A fx^2 - 2 B fx + C <= m(x)
    double A = 0.0, B = 0.0, C = 0.0;
    for (auto [z, b] : graph.neighbors(x)) {
      A += b;
      B += b * f[static_cast<size_t>(z)];
      C += b * f[static_cast<size_t>(z)] * f[static_cast<size_t>(z)];
    }
    const double disc = B * B - A * (C - graph.measure(x));
    if (disc < 0.0) return std::numeric_limits<double>::quiet_NaN();
    cap = std::min(cap, (B + std::sqrt(disc)) / A);
    return cap;
  };

  double best = 0.0;  // f = 0 is feasible
  std::vector<double> best_vars(static_cast<size_t>(dim), 0.0);

  const int points = spec.points_per_axis;
  for (int round = 0; round <= spec.refine_rounds; ++round) {
    std::vector<double> step(static_cast<size_t>(dim));
    for (int k = 0; k < dim; ++k)
      step[static_cast<size_t>(k)] =
          spec.step > 0.0 && round == 0
              ? spec.step
              : (hi[static_cast<size_t>(k)] - lo[static_cast<size_t>(k)]) /
                    static_cast<double>(points - 1);

    std::vector<int> idx(static_cast<size_t>(dim), 0);
    while (true) {
      for (int k = 0; k < dim; ++k)
        f[static_cast<size_t>(vars[static_cast<size_t>(k)])] =
            lo[static_cast<size_t>(k)] +
            step[static_cast<size_t>(k)] *
                static_cast<double>(idx[static_cast<size_t>(k)]);
      const double cap = max_fx();
      if (!std::isnan(cap) && cap > best) {
        // back off one sliver and verify with the exact check
        f[static_cast<size_t>(x)] = cap - 1e-12 * (1.0 + std::abs(cap));
        if (f[static_cast<size_t>(x)] > best && feasible()) {
          best = f[static_cast<size_t>(x)];
          for (int k = 0; k < dim; ++k)
            best_vars[static_cast<size_t>(k)] =
                f[static_cast<size_t>(vars[static_cast<size_t>(k)])];
        }
      }
      if (dim == 0) break;
      // odometer over the lattice, lowest index fastest
      bool carry = true;
      for (int k = 0; k < dim; ++k) {
        if (++idx[static_cast<size_t>(k)] < points) {
          carry = false;
          break;
        }
        idx[static_cast<size_t>(k)] = 0;
      }
      if (carry) break;
    }
    if (dim == 0) break;

    // Halve the step and re-center the window on the incumbent.
    for (int k = 0; k < dim; ++k) {
      const double h = 0.5 * step[static_cast<size_t>(k)];
      const double w = h * static_cast<double>(points - 1) / 2.0;
      lo[static_cast<size_t>(k)] = best_vars[static_cast<size_t>(k)] - w;
      hi[static_cast<size_t>(k)] = best_vars[static_cast<size_t>(k)] + w;
    }
  }
  if (dim == 0) return best;

  // Lattice refinement freezes on square-root ridges (a step of h buys ~h in
  // value but costs ~sqrt(h) off the ridge). The profile objective
  // u -> max_fx(u) is a minimum of concave caps over a convex region, so a
  // deterministic ellipsoid pass with analytic subgradients finishes the job.
  // Every candidate still goes through the exact feasibility check, keeping
  // the result a true lower bound.
  if (dim == 1) {
    // one free coordinate: the profile is concave in it; ternary search
    PseudoMetric ds = universal_bound_metric(graph);
    double a = -ds(vars[0], y), b = ds(vars[0], y);
    for (int iter = 0; iter < 200; ++iter) {
      const double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
      auto value_at = [&](double u) {
        f[static_cast<size_t>(vars[0])] = u;
        const double cap = max_fx();
        return std::isnan(cap) ? -kInfDistance : cap;
      };
      if (value_at(m1) < value_at(m2))
        a = m1;
      else
        b = m2;
    }
    f[static_cast<size_t>(vars[0])] = 0.5 * (a + b);
    const double cap = max_fx();
    if (!std::isnan(cap) && cap > best) {
      f[static_cast<size_t>(x)] = cap - 1e-12 * (1.0 + std::abs(cap));
      if (f[static_cast<size_t>(x)] > best && feasible())
        best = f[static_cast<size_t>(x)];
    }
    return best;
  }

  {
    std::vector<double> center(best_vars);
    std::vector<std::vector<double>> shape(
        static_cast<size_t>(dim), std::vector<double>(static_cast<size_t>(dim), 0.0));
    PseudoMetric ds = universal_bound_metric(graph);
    double radius2 = 0.0;
    for (int k = 0; k < dim; ++k) {
      const double L = ds(vars[static_cast<size_t>(k)], y);
      radius2 += 4.0 * L * L;  // scale-homogeneous so covariances stay exact
    }
    for (int k = 0; k < dim; ++k) shape[static_cast<size_t>(k)][static_cast<size_t>(k)] = radius2;
    const double dd = static_cast<double>(dim);

    for (int iter = 0; iter < 140 * dim + 200; ++iter) {
      for (int k = 0; k < dim; ++k)
        f[static_cast<size_t>(vars[static_cast<size_t>(k)])] =
            center[static_cast<size_t>(k)];

      // subgradient of the cut: either a violated lattice constraint or the
      // active cap of the objective
      std::vector<double> cut(static_cast<size_t>(dim), 0.0);
      bool feasibility_cut = false;
      for (int v = 0; v < n && !feasibility_cut; ++v) {
        if (v == x) continue;
        double acc = 0.0;
        for (auto [z, b] : graph.neighbors(v)) {
          if (z == x) continue;
          const double d = f[static_cast<size_t>(v)] - f[static_cast<size_t>(z)];
          acc += b * d * d;
        }
        if (acc > graph.measure(v)) {
          // gradient of the violated quadratic, restricted to free coords
          for (int k = 0; k < dim; ++k) {
            const int u = vars[static_cast<size_t>(k)];
            double gcomp = 0.0;
            if (u == v) {
              for (auto [z, b] : graph.neighbors(v)) {
                if (z == x) continue;
                gcomp += 2.0 * b *
                         (f[static_cast<size_t>(v)] - f[static_cast<size_t>(z)]);
              }
            } else if (graph.edge_weight(v, u) > 0.0 && v != x) {
              gcomp = -2.0 * graph.edge_weight(v, u) *
                      (f[static_cast<size_t>(v)] - f[static_cast<size_t>(u)]);
            }
            cut[static_cast<size_t>(k)] = -gcomp;  // move toward feasibility
          }
          feasibility_cut = true;
        }
      }

      if (!feasibility_cut) {
        const double cap = max_fx();
        if (std::isnan(cap)) {
          // the x-vertex discriminant is negative: no feasible f(x) here;
          // cut along the discriminant's gradient toward feasibility
          double A = 0.0, B = 0.0;
          for (auto [z, b] : graph.neighbors(x)) {
            A += b;
            B += b * f[static_cast<size_t>(z)];
          }
          bool any = false;
          for (int k = 0; k < dim; ++k) {
            const int u = vars[static_cast<size_t>(k)];
            const double bxu = graph.edge_weight(x, u);
            double gcomp = 0.0;
            if (bxu > 0.0) {
              // d disc / d f_u with disc = B^2 - A (C - m)
              gcomp = 2.0 * B * bxu - A * 2.0 * bxu * f[static_cast<size_t>(u)];
              any = true;
            }
            cut[static_cast<size_t>(k)] = gcomp;
          }
          if (!any) break;
          feasibility_cut = true;
        } else {
          if (cap > best) {
            f[static_cast<size_t>(x)] = cap - 1e-12 * (1.0 + std::abs(cap));
            if (f[static_cast<size_t>(x)] > best && feasible()) {
              best = f[static_cast<size_t>(x)];
            }
          }
          // subgradient of the active cap
          double active = std::numeric_limits<double>::infinity();
          int active_w = -1;  // -1: the constraint at x
          for (auto [w, bwx] : graph.neighbors(x)) {
            double acc = 0.0;
            for (auto [z, b] : graph.neighbors(w)) {
              if (z == x) continue;
              const double d =
                  f[static_cast<size_t>(w)] - f[static_cast<size_t>(z)];
              acc += b * d * d;
            }
            const double val = f[static_cast<size_t>(w)] +
                               std::sqrt((graph.measure(w) - acc) / bwx);
            if (val < active) {
              active = val;
              active_w = w;
            }
          }
          double A = 0.0, B = 0.0, C = 0.0;
          for (auto [z, b] : graph.neighbors(x)) {
            A += b;
            B += b * f[static_cast<size_t>(z)];
            C += b * f[static_cast<size_t>(z)] * f[static_cast<size_t>(z)];
          }
          const double disc = B * B - A * (C - graph.measure(x));
          const double xcap = (B + std::sqrt(std::max(disc, 0.0))) / A;
          for (int k = 0; k < dim; ++k) {
            const int u = vars[static_cast<size_t>(k)];
            double gcomp = 0.0;
            if (xcap <= active) {
              const double bxu = graph.edge_weight(x, u);
              if (bxu > 0.0) {
                const double dB = bxu;
                const double dC = 2.0 * bxu * f[static_cast<size_t>(u)];
                const double sq = std::sqrt(std::max(disc, 1e-300));
                gcomp = (dB + (2.0 * B * dB - A * dC) / (2.0 * sq)) / A;
              }
            } else {
              const int w = active_w;
              double rest = graph.measure(w);
              for (auto [z, b] : graph.neighbors(w)) {
                if (z == x) continue;
                const double d =
                    f[static_cast<size_t>(w)] - f[static_cast<size_t>(z)];
                rest -= b * d * d;
              }
              const double bwx = graph.edge_weight(w, x);
              const double sq = std::sqrt(std::max(rest * bwx, 1e-300));
              if (u == w) {
                gcomp = 1.0;
                double deriv = 0.0;
                for (auto [z, b] : graph.neighbors(w)) {
                  if (z == x) continue;
                  deriv += -2.0 * b * (f[static_cast<size_t>(w)] -
                                       f[static_cast<size_t>(z)]);
                }
                gcomp += bwx * deriv / (2.0 * sq);
              } else if (graph.edge_weight(w, u) > 0.0) {
                const double deriv =
                    2.0 * graph.edge_weight(w, u) *
                    (f[static_cast<size_t>(w)] - f[static_cast<size_t>(u)]);
                gcomp = bwx * deriv / (2.0 * sq);
              }
            }
            cut[static_cast<size_t>(k)] = gcomp;  // ascend the active cap
          }
        }
      }

      // standard ellipsoid update, maximizing along `cut`
      double gPg = 0.0;
      std::vector<double> Pg(static_cast<size_t>(dim), 0.0);
      for (int a = 0; a < dim; ++a) {
        for (int b2 = 0; b2 < dim; ++b2)
          Pg[static_cast<size_t>(a)] += shape[static_cast<size_t>(a)][static_cast<size_t>(b2)] *
                                        cut[static_cast<size_t>(b2)];
        gPg += cut[static_cast<size_t>(a)] * Pg[static_cast<size_t>(a)];
      }
      if (!(gPg > 1e-28)) break;
      const double norm = std::sqrt(gPg);
      for (int a = 0; a < dim; ++a)
        center[static_cast<size_t>(a)] += Pg[static_cast<size_t>(a)] / ((dd + 1.0) * norm);
      const double c1 = dd * dd / (dd * dd - 1.0);
      const double c2 = 2.0 / (dd + 1.0);
      for (int a = 0; a < dim; ++a)
        for (int b2 = 0; b2 < dim; ++b2)
          shape[static_cast<size_t>(a)][static_cast<size_t>(b2)] =
              c1 * (shape[static_cast<size_t>(a)][static_cast<size_t>(b2)] -
                    c2 * Pg[static_cast<size_t>(a)] * Pg[static_cast<size_t>(b2)] / gPg);
    }
  }
  return best;
}

namespace {

// After raising one entry, the triangle inequality can only fail with the
// raised entry (or a subsequently raised one) on the long side. Restoring it
// means raising one of the two entries on the short side, and the choice
// matters, so all repair splits are explored. Every raise adds at most the
// original delta, so the recursion is shallow on n <= 5.
bool repair_search(const WeightedGraph& graph, PseudoMetric tau, int depth) {
  const int n = tau.size();
  if (depth <= 0) return false;
  for (int a = 0; a < n; ++a)
    for (int c = a + 1; c < n; ++c)
      for (int b = 0; b < n; ++b) {
        if (b == a || b == c) continue;
        const double deficit = tau(a, c) - tau(a, b) - tau(b, c);
        if (deficit <= 1e-15) continue;
        PseudoMetric left = tau;
        left.set(a, b, tau(a, b) + deficit);
        if (repair_search(graph, std::move(left), depth - 1)) return true;
        PseudoMetric right = tau;
        right.set(b, c, tau(b, c) + deficit);
        return repair_search(graph, std::move(right), depth - 1);
      }
  return vertex_loads(graph, tau).is_intrinsic();
}

}  // namespace

bool maximality_check_exhaustive(const WeightedGraph& graph,
                                 const PseudoMetric& rho, double delta_grid) {
  const int n = graph.vertex_count();
  if (n > 5) throw std::invalid_argument("oracle limited to n <= 5");
  if (rho.size() != n) throw std::invalid_argument("shape mismatch");
  if (!(delta_grid > 0.0)) throw std::invalid_argument("delta must be positive");

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      PseudoMetric trial = rho;
      trial.set(i, j, rho(i, j) + delta_grid);
      if (repair_search(graph, std::move(trial), 64)) return false;
    }
  }
  return true;
}

ZSegmentResult z_segment_maximal_family(const WeightedGraph& segment,
                                        const std::vector<double>& f,
                                        bool exact) {
  const int n = segment.vertex_count();
  if (static_cast<int>(f.size()) != n)
    throw std::invalid_argument("function length mismatch");
  if (n < 3)
    throw std::invalid_argument("segment needs an interior vertex");
  // Shape check: unit path with counting measure.
  for (int v = 0; v < n; ++v) {
    if (segment.measure(v) != 1.0)
      throw std::invalid_argument("segment must carry the counting measure");
    const int expect = (v == 0 || v == n - 1) ? 1 : 2;
    if (segment.neighbor_count(v) != expect)
      throw std::invalid_argument("graph is not a path");
    if (v + 1 < n && segment.edge_weight(v, v + 1) != 1.0)
      throw std::invalid_argument("segment must have unit weights");
  }

  ZSegmentResult out;
  out.holds = true;
  for (int v = 1; v + 1 < n; ++v) {
    if (exact) {
      // Doubles are rationals; the identity is decided without rounding.
      mpq_class a(f[static_cast<size_t>(v + 1)]);
      a -= mpq_class(f[static_cast<size_t>(v)]);
      mpq_class b(f[static_cast<size_t>(v - 1)]);
      b -= mpq_class(f[static_cast<size_t>(v)]);
      if (a * a + b * b != 1) {
        out.holds = false;
        out.failing_vertex = v;
        return out;
      }
    } else {
      const double a = f[static_cast<size_t>(v + 1)] - f[static_cast<size_t>(v)];
      const double b = f[static_cast<size_t>(v - 1)] - f[static_cast<size_t>(v)];
      if (std::abs(a * a + b * b - 1.0) > 1e-12) {
        out.holds = false;
        out.failing_vertex = v;
        return out;
      }
    }
  }
  return out;
}

}  // namespace gim
