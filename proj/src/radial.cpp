#include "gim/radial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gim/metric_kit.hpp"

namespace gim {

namespace {

bool close_rel(double a, double b, double tau) {
  return std::abs(a - b) <= tau * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

DetectResult detect_radial_symmetry(const WeightedGraph& graph, int root,
                                    double tau_rad) {
  const int n = graph.vertex_count();
  if (root < 0 || root >= n) throw std::out_of_range("root out of range");
  if (!components(graph).connected())
    throw std::invalid_argument("detection requires a connected graph");

  DetectResult out;
  out.depths = bfs_depths(graph, root);
  const int R = *std::max_element(out.depths.begin(), out.depths.end());

  std::vector<std::vector<int>> spheres(static_cast<size_t>(R) + 1);
  for (int v = 0; v < n; ++v)
    spheres[static_cast<size_t>(out.depths[static_cast<size_t>(v)])].push_back(v);

  auto kappa_dir = [&](int v, int delta) {
    const int target = out.depths[static_cast<size_t>(v)] + delta;
    double acc = 0.0;
    for (auto [z, b] : graph.neighbors(v))
      if (out.depths[static_cast<size_t>(z)] == target) acc += b;
    return acc / graph.measure(v);
  };

  RadialProfile profile;
  profile.root = root;
  profile.horizon = R;
  profile.sphere_mass.resize(static_cast<size_t>(R) + 1);
  profile.kappa_plus.resize(static_cast<size_t>(R) + 1);
  profile.kappa_minus.resize(static_cast<size_t>(R) + 1);

  for (int r = 0; r <= R; ++r) {
    const auto& sphere = spheres[static_cast<size_t>(r)];
    double mass = 0.0;
    for (int v : sphere) mass += graph.measure(v);
    profile.sphere_mass[static_cast<size_t>(r)] = mass;

    const double kp0 = kappa_dir(sphere.front(), +1);
    const double km0 = r == 0 ? 0.0 : kappa_dir(sphere.front(), -1);
    for (size_t k = 1; k < sphere.size(); ++k) {
      const double kp = kappa_dir(sphere[k], +1);
      if (!close_rel(kp, kp0, tau_rad)) {
        out.failure = RadialSymmetryFailure{
            r, sphere.front(), sphere[k],
            "kappa_+ differs on sphere " + std::to_string(r)};
        return out;
      }
      const double km = kappa_dir(sphere[k], -1);
      if (!close_rel(km, km0, tau_rad)) {
        out.failure = RadialSymmetryFailure{
            r, sphere.front(), sphere[k],
            "kappa_- differs on sphere " + std::to_string(r)};
        return out;
      }
    }
    profile.kappa_plus[static_cast<size_t>(r)] = kp0;
    profile.kappa_minus[static_cast<size_t>(r)] = km0;
  }
  profile.horizon_partial = true;
  out.profile = std::move(profile);
  return out;
}

RadialGradient radial_gradient(const RadialProfile& profile,
                               const RadialFunction& f) {
  const int R = profile.horizon;
  if (f.horizon() != R) throw std::invalid_argument("horizon mismatch");
  RadialGradient out;
  out.squared.assign(static_cast<size_t>(R) + 1, 0.0);
  for (int r = 0; r <= R; ++r) {
    double acc = 0.0;
    if (r >= 1) {
      const double d = f.values[static_cast<size_t>(r)] -
                       f.values[static_cast<size_t>(r - 1)];
      acc += profile.kappa_minus[static_cast<size_t>(r)] * d * d;
    }
    if (r < R) {
      const double d = f.values[static_cast<size_t>(r)] -
                       f.values[static_cast<size_t>(r + 1)];
      acc += profile.kappa_plus[static_cast<size_t>(r)] * d * d;
    }
    // at r = R the forward term is dropped (partial at the horizon)
    out.squared[static_cast<size_t>(r)] = acc;
  }
  out.partial_at_horizon = true;
  return out;
}

SeriesTerms series_terms(const RadialProfile& profile) {
  SeriesTerms out;
  const int R = profile.horizon;
  double sum3 = 0.0, sum5 = 0.0;
  for (int r = 1; r + 1 <= R; ++r) {
    const double mr = profile.sphere_mass[static_cast<size_t>(r)];
    const double mr1 = profile.sphere_mass[static_cast<size_t>(r + 1)];
    const double db = profile.boundary(r);
    const double t3 = std::sqrt(std::min(mr, mr1)) / std::sqrt(db);
    const double t5 = 1.0 / std::sqrt(profile.kappa_plus[static_cast<size_t>(r)]);
    sum3 += t3;
    sum5 += t5;
    out.term_iii.push_back(t3);
    out.term_v.push_back(t5);
    out.partial_iii.push_back(sum3);
    out.partial_v.push_back(sum5);
  }
  return out;
}

DivergenceReport classify_divergence(const RadialProfile& profile) {
  DivergenceReport out;
  auto st = series_terms(profile);
  out.partial_sum_iii = st.partial_iii.empty() ? 0.0 : st.partial_iii.back();
  out.partial_sum_v = st.partial_v.empty() ? 0.0 : st.partial_v.back();

  if (!profile.growth) {
    out.explanation = "no growth descriptor; verdict undetermined (partial sum iii = " +
                      std::to_string(out.partial_sum_iii) + ", v = " +
                      std::to_string(out.partial_sum_v) + ")";
    return out;
  }
  const auto& g = *profile.growth;
  using F = GrowthDescriptor::Family;
  using Fo = GrowthDescriptor::Form;
  auto verdict = [](bool diverges) {
    return diverges ? DivergenceVerdict::kDiverges
                    : DivergenceVerdict::kConverges;
  };
  if (g.family == F::kAntitree && g.form == Fo::kPolynomial) {
    // terms ~ r^{-alpha/2} for both criteria
    out.criterion_iii = verdict(g.alpha <= 2.0);
    out.criterion_v = verdict(g.alpha <= 2.0);
    out.explanation = "antitree with |S_r| ~ r^alpha: diverges iff alpha <= 2";
  } else if (g.family == F::kTree && g.form == Fo::kPolynomial) {
    out.criterion_iii = DivergenceVerdict::kDiverges;
    out.criterion_v = DivergenceVerdict::kDiverges;
    out.explanation = "tree with polynomial spheres: terms do not vanish";
  } else if (g.family == F::kTree && g.form == Fo::kStretchedExponential) {
    out.criterion_iii = verdict(g.alpha <= 1.0);
    out.criterion_v = verdict(g.alpha <= 1.0);
    out.explanation = "tree with |S_r| ~ e^{r^alpha}: diverges iff alpha <= 1";
  } else {
    out.criterion_iii = DivergenceVerdict::kConverges;
    out.criterion_v = DivergenceVerdict::kConverges;
    out.explanation = "antitree with stretched-exponential spheres: converges";
  }
  return out;
}

CutoffResult build_cutoffs(const RadialProfile& profile, int n) {
  if (n < 0) throw std::invalid_argument("cutoff index must be >= 0");
  const int R = profile.horizon;
  CutoffResult out;
  out.chi.values.assign(static_cast<size_t>(R) + 1, 1.0);
  double drop = 0.0;
  for (int r = 1; r <= R; ++r) {
    const int k = r - 1;
    if (k >= n) {
      const double mk = profile.sphere_mass[static_cast<size_t>(k)];
      const double mk1 = profile.sphere_mass[static_cast<size_t>(k + 1)];
      drop += std::sqrt(std::min(mk, mk1)) / std::sqrt(profile.boundary(k));
    }
    out.chi.values[static_cast<size_t>(r)] = std::max(0.0, 1.0 - drop);
    if (out.chi.values[static_cast<size_t>(r)] == 0.0 && out.support_radius < 0)
      out.support_radius = r;
  }
  out.support_closed = out.chi.values.back() == 0.0;
  return out;
}

CutoffFamilyResult rescaled_cutoff_family(const RadialProfile& profile,
                                          int count) {
  CutoffFamilyResult out;
  for (int k = 1; k <= count; ++k) {
    auto cut = build_cutoffs(profile, k - 1);
    if (!cut.support_closed) {
      out.ok = false;
      out.note = "support of chi_" + std::to_string(k - 1) +
                 " does not close within the horizon";
      return out;
    }
    const double t = 1.0 / std::sqrt(2.0 * std::pow(2.0, k));
    RadialFunction phi;
    phi.values.resize(cut.chi.values.size());
    for (size_t r = 0; r < phi.values.size(); ++r)
      phi.values[r] = 1.0 - t * (1.0 - cut.chi.values[r]);
    out.phis.push_back(std::move(phi));
  }
  out.ok = true;
  return out;
}

RadialMetricResult finite_ball_metric(const RadialProfile& profile,
                                      const std::vector<RadialFunction>& phis) {
  const int R = profile.horizon;
  RadialMetricResult out;
  if (phis.empty()) throw std::invalid_argument("need at least one cutoff");
  for (const auto& phi : phis)
    if (phi.horizon() != R) throw std::invalid_argument("horizon mismatch");

  out.gradient_budget = 0.0;
  for (const auto& phi : phis) {
    auto grad = radial_gradient(profile, phi);
    double sup = 0.0;
    for (double v : grad.squared) sup = std::max(sup, v);
    out.gradient_budget += sup;
  }
  out.normalization_ok = out.gradient_budget <= 1.0 + 1e-12;
  if (!out.normalization_ok)
    out.note = "gradient budget " + std::to_string(out.gradient_budget) +
               " exceeds 1; rescale the family";

  out.defect_per_radius.assign(static_cast<size_t>(R) + 1, 0.0);
  for (int r = 0; r <= R; ++r) {
    double acc = 0.0;
    for (const auto& phi : phis) {
      const double d = 1.0 - phi.values[static_cast<size_t>(r)];
      acc += d * d;
    }
    out.defect_per_radius[static_cast<size_t>(r)] = acc;
  }

  out.radial_table = PseudoMetric(R + 1);
  for (int r = 0; r <= R; ++r)
    for (int s = r + 1; s <= R; ++s) {
      double acc = 0.0;
      for (const auto& phi : phis) {
        const double d = phi.values[static_cast<size_t>(r)] -
                         phi.values[static_cast<size_t>(s)];
        acc += d * d;
      }
      out.radial_table.set(r, s, std::sqrt(acc));
    }
  return out;
}

RadializeResult radialize(const WeightedGraph& graph,
                          const RadialProfile& profile,
                          const std::vector<double>& chi) {
  const int n = graph.vertex_count();
  if (static_cast<int>(chi.size()) != n)
    throw std::invalid_argument("function length mismatch");
  auto depths = bfs_depths(graph, profile.root);
  const int R = *std::max_element(depths.begin(), depths.end());
  if (R != profile.horizon)
    throw std::invalid_argument("profile does not match the graph horizon");
  for (int r = 0; r <= R; ++r) {
    double mass = 0.0;
    for (int v = 0; v < n; ++v)
      if (depths[static_cast<size_t>(v)] == r) mass += graph.measure(v);
    if (!close_rel(mass, profile.sphere_mass[static_cast<size_t>(r)], 1e-9))
      throw std::invalid_argument("profile does not match the graph spheres");
  }

  RadializeResult out;
  out.ray.assign(static_cast<size_t>(R) + 1, -1);
  out.ray[0] = profile.root;
  out.phi.values.assign(static_cast<size_t>(R) + 1, 0.0);
  out.phi.values[0] = chi[static_cast<size_t>(profile.root)];
  for (int r = 1; r <= R; ++r) {
    const int prev = out.ray[static_cast<size_t>(r - 1)];
    const double ref = chi[static_cast<size_t>(prev)];
    int best = -1;
    double best_gap = kInfDistance;
    for (auto [z, b] : graph.neighbors(prev)) {
      (void)b;
      if (depths[static_cast<size_t>(z)] != r) continue;
      const double gap = std::abs(chi[static_cast<size_t>(z)] - ref);
      if (gap < best_gap || (gap == best_gap && (best < 0 || z < best))) {
        best_gap = gap;
        best = z;
      }
    }
    if (best < 0)
      throw std::invalid_argument("ray stuck: no neighbor in the next sphere");
    out.ray[static_cast<size_t>(r)] = best;
    out.phi.values[static_cast<size_t>(r)] = chi[static_cast<size_t>(best)];
  }
  return out;
}

std::vector<double> lift_to_graph(const std::vector<int>& depths,
                                  const RadialFunction& f) {
  std::vector<double> out(depths.size());
  for (size_t v = 0; v < depths.size(); ++v) {
    const int r = depths[v];
    if (r < 0 || r > f.horizon())
      throw std::invalid_argument("depth outside the radial horizon");
    out[v] = f.values[static_cast<size_t>(r)];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Generators

namespace {

void check_sizes(const std::vector<long long>& sizes) {
  if (sizes.empty()) throw std::invalid_argument("need at least one sphere");
  if (sizes.front() != 1)
    throw std::invalid_argument("sphere S_0 must be the root alone");
  for (long long s : sizes)
    if (s <= 0) throw std::invalid_argument("sphere sizes must be positive");
}

long long total_vertices(const std::vector<long long>& sizes) {
  long long total = 0;
  for (long long s : sizes) {
    total += s;
    if (total > 50'000'000)
      throw std::invalid_argument("truncation too large to materialize");
  }
  return total;
}

}  // namespace

GeneratedGraph generate_tree(const std::vector<long long>& sphere_sizes) {
  check_sizes(sphere_sizes);
  const int R = static_cast<int>(sphere_sizes.size()) - 1;
  for (int r = 0; r < R; ++r) {
    if (sphere_sizes[static_cast<size_t>(r + 1)] <
        sphere_sizes[static_cast<size_t>(r)])
      throw std::invalid_argument("tree spheres must be nondecreasing");
    if (sphere_sizes[static_cast<size_t>(r + 1)] %
            sphere_sizes[static_cast<size_t>(r)] !=
        0)
      throw std::invalid_argument(
          "sphere size " + std::to_string(sphere_sizes[static_cast<size_t>(r + 1)]) +
          " not divisible by " +
          std::to_string(sphere_sizes[static_cast<size_t>(r)]) +
          "; offspring counts would differ within a sphere");
  }
  const long long nv = total_vertices(sphere_sizes);
  std::vector<long long> offset(sphere_sizes.size() + 1, 0);
  for (size_t r = 0; r < sphere_sizes.size(); ++r)
    offset[r + 1] = offset[r] + sphere_sizes[r];

  std::vector<Edge> edges;
  edges.reserve(static_cast<size_t>(nv) - 1);
  for (int r = 0; r < R; ++r) {
    const long long kids =
        sphere_sizes[static_cast<size_t>(r + 1)] / sphere_sizes[static_cast<size_t>(r)];
    for (long long t = 0; t < sphere_sizes[static_cast<size_t>(r + 1)]; ++t) {
      const int child = static_cast<int>(offset[static_cast<size_t>(r) + 1] + t);
      const int parent = static_cast<int>(offset[static_cast<size_t>(r)] + t / kids);
      edges.push_back({parent, child, 1.0});
    }
  }
  WeightedGraph graph(static_cast<int>(nv), std::move(edges),
                      std::vector<double>(static_cast<size_t>(nv), 1.0));

  RadialProfile profile;
  profile.root = 0;
  profile.horizon = R;
  profile.sphere_mass.assign(sphere_sizes.begin(), sphere_sizes.end());
  profile.kappa_plus.assign(static_cast<size_t>(R) + 1, 0.0);
  profile.kappa_minus.assign(static_cast<size_t>(R) + 1, 0.0);
  for (int r = 0; r < R; ++r)
    profile.kappa_plus[static_cast<size_t>(r)] =
        static_cast<double>(sphere_sizes[static_cast<size_t>(r + 1)]) /
        static_cast<double>(sphere_sizes[static_cast<size_t>(r)]);
  for (int r = 1; r <= R; ++r) profile.kappa_minus[static_cast<size_t>(r)] = 1.0;
  return {std::move(graph), std::move(profile)};
}

GeneratedGraph generate_antitree(const std::vector<long long>& sphere_sizes) {
  check_sizes(sphere_sizes);
  const int R = static_cast<int>(sphere_sizes.size()) - 1;
  const long long nv = total_vertices(sphere_sizes);
  long long ne = 0;
  for (int r = 0; r < R; ++r) {
    ne += sphere_sizes[static_cast<size_t>(r)] * sphere_sizes[static_cast<size_t>(r + 1)];
    if (ne > 50'000'000)
      throw std::invalid_argument("truncation too large to materialize");
  }
  std::vector<long long> offset(sphere_sizes.size() + 1, 0);
  for (size_t r = 0; r < sphere_sizes.size(); ++r)
    offset[r + 1] = offset[r] + sphere_sizes[r];

  std::vector<Edge> edges;
  edges.reserve(static_cast<size_t>(ne));
  for (int r = 0; r < R; ++r)
    for (long long a = 0; a < sphere_sizes[static_cast<size_t>(r)]; ++a)
      for (long long c = 0; c < sphere_sizes[static_cast<size_t>(r + 1)]; ++c)
        edges.push_back({static_cast<int>(offset[static_cast<size_t>(r)] + a),
                         static_cast<int>(offset[static_cast<size_t>(r) + 1] + c),
                         1.0});
  WeightedGraph graph(static_cast<int>(nv), std::move(edges),
                      std::vector<double>(static_cast<size_t>(nv), 1.0));

  RadialProfile profile;
  profile.root = 0;
  profile.horizon = R;
  profile.sphere_mass.assign(sphere_sizes.begin(), sphere_sizes.end());
  profile.kappa_plus.assign(static_cast<size_t>(R) + 1, 0.0);
  profile.kappa_minus.assign(static_cast<size_t>(R) + 1, 0.0);
  for (int r = 0; r < R; ++r)
    profile.kappa_plus[static_cast<size_t>(r)] =
        static_cast<double>(sphere_sizes[static_cast<size_t>(r + 1)]);
  for (int r = 1; r <= R; ++r)
    profile.kappa_minus[static_cast<size_t>(r)] =
        static_cast<double>(sphere_sizes[static_cast<size_t>(r - 1)]);
  return {std::move(graph), std::move(profile)};
}

std::vector<long long> polynomial_sphere_sizes(double alpha, int radii) {
  if (radii < 0) throw std::invalid_argument("radii must be >= 0");
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  std::vector<long long> sizes;
  sizes.reserve(static_cast<size_t>(radii) + 1);
  for (int r = 0; r <= radii; ++r)
    sizes.push_back(std::max<long long>(
        1, std::llround(std::pow(static_cast<double>(r + 1), alpha))));
  return sizes;
}

namespace {

RadialProfile profile_from_sizes(const std::vector<double>& sizes,
                                 GrowthDescriptor growth) {
  RadialProfile p;
  p.root = 0;
  p.horizon = static_cast<int>(sizes.size()) - 1;
  p.sphere_mass = sizes;
  p.kappa_plus.assign(sizes.size(), 0.0);
  p.kappa_minus.assign(sizes.size(), 0.0);
  const bool antitree = growth.family == GrowthDescriptor::Family::kAntitree;
  for (size_t r = 0; r + 1 < sizes.size(); ++r)
    p.kappa_plus[r] = antitree ? sizes[r + 1] : sizes[r + 1] / sizes[r];
  for (size_t r = 1; r < sizes.size(); ++r)
    p.kappa_minus[r] = antitree ? sizes[r - 1] : 1.0;
  p.growth = growth;
  return p;
}

}  // namespace

RadialProfile antitree_profile(double alpha, int radii) {
  auto s = polynomial_sphere_sizes(alpha, radii);
  std::vector<double> sizes(s.begin(), s.end());
  return profile_from_sizes(
      sizes, {GrowthDescriptor::Family::kAntitree,
              GrowthDescriptor::Form::kPolynomial, alpha});
}

RadialProfile tree_profile_polynomial(double alpha, int radii) {
  // Enforce nondecreasing integer spheres so kappa_- stays 1.
  auto s = polynomial_sphere_sizes(alpha, radii);
  for (size_t r = 1; r < s.size(); ++r) s[r] = std::max(s[r], s[r - 1]);
  std::vector<double> sizes(s.begin(), s.end());
  return profile_from_sizes(sizes, {GrowthDescriptor::Family::kTree,
                                    GrowthDescriptor::Form::kPolynomial, alpha});
}

RadialProfile tree_profile_stretched(double alpha, int radii) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  std::vector<double> sizes;
  sizes.reserve(static_cast<size_t>(radii) + 1);
  double prev = 1.0;
  for (int r = 0; r <= radii; ++r) {
    double v = std::exp(std::pow(static_cast<double>(r), alpha));
    v = std::max(prev, std::round(v));
    if (!std::isfinite(v))
      throw std::invalid_argument("stretched-exponential spheres overflow");
    sizes.push_back(v);
    prev = v;
  }
  return profile_from_sizes(sizes,
                            {GrowthDescriptor::Family::kTree,
                             GrowthDescriptor::Form::kStretchedExponential,
                             alpha});
}

}  // namespace gim
