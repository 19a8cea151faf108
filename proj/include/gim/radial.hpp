#ifndef GIM_RADIAL_HPP
#define GIM_RADIAL_HPP

#include <optional>
#include <string>
#include <vector>

#include "gim/pseudo_metric.hpp"
#include "gim/weighted_graph.hpp"

namespace gim {

/// Closed-form growth of sphere sizes, carried by generated profiles so the
/// divergence classifier can give analytic verdicts. Polynomial means
/// |S_r| ~ r^alpha, stretched-exponential |S_r| ~ e^{r^alpha}.
struct GrowthDescriptor {
  enum class Family { kTree, kAntitree };
  enum class Form { kPolynomial, kStretchedExponential };
  Family family;
  Form form;
  double alpha = 0.0;
};

/// Per-radius data of a weakly spherically symmetric graph up to a finite
/// horizon R. kappa_plus[R] is 0 on truncations (the next sphere is not
/// represented); quantities needing it are flagged partial.
struct RadialProfile {
  int root = 0;
  int horizon = 0;
  std::vector<double> sphere_mass;   // m(S_r), r = 0..R
  std::vector<double> kappa_plus;    // r = 0..R
  std::vector<double> kappa_minus;   // kappa_minus[0] = 0
  bool horizon_partial = true;
  std::optional<GrowthDescriptor> growth;

  /// |dB_r| = kappa_plus(r) m(S_r); meaningful for r < horizon.
  double boundary(int r) const {
    return kappa_plus[static_cast<size_t>(r)] *
           sphere_mass[static_cast<size_t>(r)];
  }
};

struct RadialSymmetryFailure {
  int radius = -1;
  int vertex_a = -1;  // witnesses with differing kappa_+ or kappa_-
  int vertex_b = -1;
  std::string what;
};

struct DetectResult {
  std::optional<RadialProfile> profile;
  std::optional<RadialSymmetryFailure> failure;
  std::vector<int> depths;  // BFS depths from the root, for lifting
  bool ok() const { return profile.has_value(); }
};

/// BFS layering from the root; succeeds iff kappa_+ and kappa_- are constant
/// on every sphere within relative tolerance tau_rad (exact data passes
/// exactly). Requires a connected graph.
DetectResult detect_radial_symmetry(const WeightedGraph& graph, int root,
                                    double tau_rad = 1e-12);

/// Values f(0..R) of a radially symmetric function.
struct RadialFunction {
  std::vector<double> values;
  int horizon() const { return static_cast<int>(values.size()) - 1; }
};

struct RadialGradient {
  std::vector<double> squared;  // |grad f|^2(r)
  bool partial_at_horizon = true;  // forward term at R dropped
};

/// |grad f|^2(r) = (1/m(S_r)) (|dB_{r-1}|(f(r)-f(r-1))^2
///                             + |dB_r|(f(r)-f(r+1))^2),
/// forward-only at r = 0, backward-only at the horizon.
RadialGradient radial_gradient(const RadialProfile& profile,
                               const RadialFunction& f);

struct SeriesTerms {
  // r = 1..R-1
  std::vector<double> term_iii;  // sqrt(m(S_r) ^ m(S_{r+1})) / sqrt(|dB_r|)
  std::vector<double> term_v;    // 1 / sqrt(kappa_+(r))
  std::vector<double> partial_iii;
  std::vector<double> partial_v;
};

SeriesTerms series_terms(const RadialProfile& profile);

enum class DivergenceVerdict { kDiverges, kConverges, kUndetermined };

struct DivergenceReport {
  DivergenceVerdict criterion_iii = DivergenceVerdict::kUndetermined;
  DivergenceVerdict criterion_v = DivergenceVerdict::kUndetermined;
  double partial_sum_iii = 0.0;
  double partial_sum_v = 0.0;
  std::string explanation;
};

/// Analytic verdicts for recognized families (antitree with polynomial
/// spheres: diverges iff alpha <= 2; tree with e^{r^alpha} spheres: diverges
/// iff alpha <= 1; polynomial trees always diverge); numeric-only profiles
/// stay undetermined with the partial sums reported.
DivergenceReport classify_divergence(const RadialProfile& profile);

struct CutoffResult {
  RadialFunction chi;
  bool support_closed = false;  // chi(R) == 0 exactly
  int support_radius = -1;      // first radius where chi vanishes
};

/// chi_n(0) = 1, chi_n(r) = (1 - sum_{k=n}^{r-1} term_iii(k))_+ truncated at
/// the horizon; 0 <= chi <= 1, nonincreasing, 1 on radii <= n, and
/// |grad chi_n|^2 <= 2.
CutoffResult build_cutoffs(const RadialProfile& profile, int n);

struct CutoffFamilyResult {
  std::vector<RadialFunction> phis;
  bool ok = false;
  std::string note;
};

/// phi_k = 1 - (1 - chi_{k-1}) / sqrt(2 * 2^k), k = 1..count: the gradient
/// budget sum ||grad phi_k||_inf^2 stays below 1 while phi_k -> 1. Fails when
/// some chi's support does not close within the horizon.
CutoffFamilyResult rescaled_cutoff_family(const RadialProfile& profile,
                                          int count);

struct RadialMetricResult {
  PseudoMetric radial_table;  // sigma(r, r') over radii 0..R
  bool normalization_ok = false;
  double gradient_budget = 0.0;            // sum_n ||grad phi_n||_inf^2
  std::vector<double> defect_per_radius;   // sum_n (1 - phi_n(r))^2
  std::string note;
  RadialMetricResult() : radial_table(1) {}
};

/// sigma(r,r') = (sum_n (phi_n(r) - phi_n(r'))^2)^{1/2} from a family with
/// gradient budget <= 1; intrinsic on the concrete truncation.
RadialMetricResult finite_ball_metric(const RadialProfile& profile,
                                      const std::vector<RadialFunction>& phis);

struct RadializeResult {
  RadialFunction phi;
  std::vector<int> ray;  // chosen x_r per radius
};

/// Ray selection from the proof of (iv) => (v): x_r minimizes
/// |chi(y) - chi(x_{r-1})| among neighbors of x_{r-1} in S_r (ties by lowest
/// index); phi(r) = chi(x_r).
RadializeResult radialize(const WeightedGraph& graph,
                          const RadialProfile& profile,
                          const std::vector<double>& chi);

/// Lift a radial function to the concrete graph via BFS depths.
std::vector<double> lift_to_graph(const std::vector<int>& depths,
                                  const RadialFunction& f);

struct GeneratedGraph {
  WeightedGraph graph;
  RadialProfile profile;
};

/// Radially symmetric tree: unit weights, counting measure, each vertex of
/// S_{r+1} has one parent, offspring counts constant per sphere. Requires
/// sizes[0] = 1, nondecreasing sizes and divisibility s_{r+1} % s_r == 0.
GeneratedGraph generate_tree(const std::vector<long long>& sphere_sizes);

/// Antitree: consecutive spheres completely joined, no edges inside spheres,
/// unit weights, counting measure. Requires sizes[0] = 1.
GeneratedGraph generate_antitree(const std::vector<long long>& sphere_sizes);

/// |S_r| = round((r+1)^alpha) for r = 0..radii.
std::vector<long long> polynomial_sphere_sizes(double alpha, int radii);

/// Profile-only construction for antitrees/trees too large to materialize.
RadialProfile antitree_profile(double alpha, int radii);
RadialProfile tree_profile_polynomial(double alpha, int radii);
RadialProfile tree_profile_stretched(double alpha, int radii);

}  // namespace gim

#endif  // GIM_RADIAL_HPP
