// gim: intrinsic pseudo metrics on finite weighted graphs.
//
// Subcommands: check, kappa, maximal, star, radial <sub>, generate <family>,
// oracle <sub>. Exit code 0 only when the command's computation converged;
// 2 flags non-convergence (partial report still printed); 1 is an input or
// usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "gim/graph_io.hpp"
#include "gim/kappa.hpp"
#include "gim/maximal.hpp"
#include "gim/metric_kit.hpp"
#include "gim/oracle.hpp"
#include "gim/perturbation.hpp"
#include "gim/radial.hpp"
#include "gim/star.hpp"
#include "gim/weighted_graph.hpp"

using nlohmann::json;

namespace {

struct GlobalOpts {
  std::string input;
  std::string output;
  std::string format = "csv";
  double eps_feas = gim::kDefaultEpsFeas;
  double tol_solve = 1e-8;
  double tau_tri = gim::kDefaultTauTri;
  double tau_rad = 1e-12;
  int horizon = 100;
};

void emit(const GlobalOpts& g, const std::string& text) {
  if (g.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(g.output);
  if (!out) throw std::runtime_error("cannot write " + g.output);
  out << text;
}

gim::WeightedGraph load_graph(const GlobalOpts& g) {
  if (g.input.empty()) throw CLI::ValidationError("--input is required");
  auto data = gim::read_graph_json_file(g.input);
  auto report = gim::validate(data);
  if (!report.ok()) {
    std::ostringstream os;
    os << "invalid graph " << g.input << ":\n";
    for (const auto& issue : report.issues)
      if (issue.is_error()) os << "  " << issue.message << "\n";
    throw std::runtime_error(os.str());
  }
  return gim::WeightedGraph::build(data);
}

std::vector<std::string> graph_labels(const gim::WeightedGraph& g) {
  std::vector<std::string> labels;
  labels.reserve(static_cast<size_t>(g.vertex_count()));
  for (int v = 0; v < g.vertex_count(); ++v) labels.push_back(g.label(v));
  return labels;
}

std::vector<long long> parse_sizes(const std::string& csv) {
  std::vector<long long> out;
  std::stringstream ss(csv);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(std::stoll(cell));
  return out;
}

std::vector<double> read_values_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<double> vals;
  double v;
  while (in >> v) vals.push_back(v);
  return vals;
}

// ---------------------------------------------------------------------------

int cmd_check(const GlobalOpts& g, const std::string& metric_path) {
  auto graph = load_graph(g);
  auto metric = gim::read_metric_csv_file(metric_path);
  if (metric.size() != graph.vertex_count())
    throw std::runtime_error("metric size does not match the graph");
  if (auto tv = metric.check_triangles(g.tau_tri)) {
    std::cerr << "metric rejected: triangle inequality fails at (" << tv->x
              << "," << tv->y << ") via " << tv->z << " by "
              << gim::format_double(tv->violation) << "\n";
    return 1;
  }
  auto loads = gim::vertex_loads(graph, metric, g.eps_feas);
  json j;
  j["verdict"] = loads.is_intrinsic() ? "intrinsic" : "not intrinsic";
  j["max_load"] = loads.max_load;
  j["worst_vertex"] = loads.worst_vertex;
  j["loads"] = loads.load;
  j["eps_feas"] = g.eps_feas;
  j["tau_tri"] = g.tau_tri;
  emit(g, j.dump(2) + "\n");
  return 0;
}

int cmd_kappa(const GlobalOpts& g) {
  auto graph = load_graph(g);
  gim::SolverOptions opt;
  opt.tol_solve = g.tol_solve;
  gim::KappaMatrixReport report;
  auto kappa = gim::kappa_matrix(graph, opt, &report);
  auto loads = gim::vertex_loads(graph, kappa, g.eps_feas);
  auto ds = gim::universal_bound_metric(graph);

  json rep;
  rep["pairs"] = report.pair_count;
  rep["all_converged"] = report.all_converged;
  json bad = json::array();
  for (auto [i, j] : report.nonconverged_pairs)
    bad.push_back(json::array({i, j}));
  rep["nonconverged_pairs"] = bad;
  rep["iterations"] = report.total_iterations;
  rep["worst_gap"] = report.worst_gap;
  rep["kappa_intrinsic"] = loads.is_intrinsic();
  rep["max_load"] = loads.max_load;
  rep["dominated_by_ds"] = gim::dominated_by(kappa, ds, 1e-8);
  double excess = 0.0;
  for (int i = 0; i < graph.vertex_count(); ++i)
    for (int j = i + 1; j < graph.vertex_count(); ++j)
      excess = std::max(excess, kappa(i, j) - ds(i, j));
  rep["max_excess_vs_ds"] = excess;
  rep["tol_solve"] = g.tol_solve;
  rep["eps_feas"] = g.eps_feas;

  if (g.format == "json") {
    json j;
    j["kappa_csv"] = gim::write_metric_csv(kappa, graph_labels(graph));
    j["report"] = rep;
    emit(g, j.dump(2) + "\n");
  } else {
    emit(g, gim::write_metric_csv(kappa, graph_labels(graph)));
    std::cerr << rep.dump(2) << "\n";
  }
  return report.all_converged ? 0 : 2;
}

int cmd_maximal(const GlobalOpts& g, const std::string& objective,
                double objective_base, const std::string& floor_kind) {
  auto graph = load_graph(g);
  const int n = graph.vertex_count();

  gim::ObjectiveWeights weights = gim::ObjectiveWeights::uniform(n);
  if (objective != "uniform") {
    int x = 0, y = 0;
    if (std::sscanf(objective.c_str(), "%d,%d", &x, &y) != 2)
      throw CLI::ValidationError("--objective must be 'uniform' or 'i,j'");
    weights = gim::ObjectiveWeights::concentrated(n, x, y, objective_base);
  }

  gim::PseudoMetric floor_metric(n);
  if (floor_kind == "path")
    floor_metric =
        gim::path_metric(graph, gim::default_intrinsic_weighting(graph));
  else if (floor_kind != "zero")
    throw CLI::ValidationError("--floor must be 'zero' or 'path'");

  gim::MaximalMetricProblem problem{graph, floor_metric, weights};
  problem.options.tol_solve = std::max(g.tol_solve, 1e-6);
  problem.eps_feas = g.eps_feas;
  auto result = gim::maximal_metric(problem);

  json rep;
  rep["objective_value"] = result.report.value;
  rep["converged"] = result.report.converged;
  rep["iterations"] = result.report.iterations;
  rep["gap_bound"] = result.report.gap_bound;
  rep["max_violation"] = result.report.max_violation;
  rep["certificate_passed"] = result.certificate_passed;
  rep["active_triangles"] = result.active_triangles;
  rep["pinned_pairs"] = result.pinned_pairs;
  json certs = json::array();
  for (const auto& c : result.certificates)
    certs.push_back({{"i", c.i},
                     {"j", c.j},
                     {"triangle_dominated", c.triangle_dominated},
                     {"bump_infeasible", c.bump_infeasible}});
  rep["certificates"] = certs;
  if (!result.report.note.empty()) rep["note"] = result.report.note;

  if (g.format == "json") {
    json j;
    j["metric_csv"] = gim::write_metric_csv(result.metric, graph_labels(graph));
    j["report"] = rep;
    emit(g, j.dump(2) + "\n");
  } else {
    emit(g, gim::write_metric_csv(result.metric, graph_labels(graph)));
    std::cerr << rep.dump(2) << "\n";
  }
  return result.report.converged ? 0 : 2;
}

int cmd_star(const GlobalOpts& g) {
  auto graph = load_graph(g);
  auto decision = gim::largest_metric_decision(graph);
  emit(g, gim::decision_json(decision));
  return 0;
}

// Resolves the profile source shared by the radial subcommands.
struct RadialSource {
  std::optional<gim::WeightedGraph> graph;
  gim::RadialProfile profile;
};

RadialSource resolve_radial_source(const GlobalOpts& g, bool want_tree,
                                   bool want_antitree, const std::string& sizes,
                                   double alpha, int root) {
  RadialSource src;
  if (want_tree || want_antitree) {
    std::vector<long long> sz;
    if (!sizes.empty())
      sz = parse_sizes(sizes);
    else if (alpha > 0.0)
      sz = gim::polynomial_sphere_sizes(alpha, g.horizon);
    else
      throw CLI::ValidationError("generator needs --sizes or --alpha");

    long long vertex_bound = 0;
    long long edge_bound = 0;
    for (size_t r = 0; r < sz.size(); ++r) {
      vertex_bound += sz[r];
      if (r + 1 < sz.size())
        edge_bound += want_antitree ? sz[r] * sz[r + 1] : sz[r + 1];
    }

    if (edge_bound <= 2'000'000 && vertex_bound <= 1'000'000) {
      auto gen = want_tree ? gim::generate_tree(sz) : gim::generate_antitree(sz);
      src.profile = std::move(gen.profile);
      src.graph = std::move(gen.graph);
    } else if (want_antitree && sizes.empty()) {
      src.profile = gim::antitree_profile(alpha, g.horizon);
    } else if (want_tree && sizes.empty()) {
      src.profile = gim::tree_profile_polynomial(alpha, g.horizon);
    } else {
      throw std::runtime_error(
          "requested truncation too large to materialize; use --alpha for a "
          "profile-only run");
    }
    if (alpha > 0.0 && !src.profile.growth) {
      src.profile.growth = gim::GrowthDescriptor{
          want_tree ? gim::GrowthDescriptor::Family::kTree
                    : gim::GrowthDescriptor::Family::kAntitree,
          gim::GrowthDescriptor::Form::kPolynomial, alpha};
    }
    return src;
  }
  auto graph = load_graph(g);
  auto det = gim::detect_radial_symmetry(graph, root, g.tau_rad);
  if (!det.ok()) {
    const auto& f = *det.failure;
    throw std::runtime_error("graph is not weakly spherically symmetric: " +
                             f.what + " (vertices " + std::to_string(f.vertex_a) +
                             ", " + std::to_string(f.vertex_b) + ")");
  }
  src.profile = *det.profile;
  src.graph = std::move(graph);
  return src;
}

int cmd_radial_profile(const GlobalOpts& g, const RadialSource& src) {
  emit(g, gim::write_profile_csv(src.profile));
  return 0;
}

int cmd_radial_series(const GlobalOpts& g, const RadialSource& src) {
  auto report = gim::classify_divergence(src.profile);
  auto verdict = [](gim::DivergenceVerdict v) {
    switch (v) {
      case gim::DivergenceVerdict::kDiverges: return "diverges";
      case gim::DivergenceVerdict::kConverges: return "converges";
      default: return "undetermined";
    }
  };
  if (g.format == "json") {
    json j;
    j["criterion_iii"] = verdict(report.criterion_iii);
    j["criterion_v"] = verdict(report.criterion_v);
    j["partial_sum_iii"] = report.partial_sum_iii;
    j["partial_sum_v"] = report.partial_sum_v;
    j["explanation"] = report.explanation;
    emit(g, j.dump(2) + "\n");
  } else {
    emit(g, gim::write_profile_csv(src.profile));
    std::cerr << "criterion (iii): " << verdict(report.criterion_iii)
              << ", criterion (v): " << verdict(report.criterion_v) << "; "
              << report.explanation << " (partial sums: iii = "
              << gim::format_double(report.partial_sum_iii)
              << ", v = " << gim::format_double(report.partial_sum_v) << ")\n";
  }
  return 0;
}

int cmd_radial_cutoffs(const GlobalOpts& g, const RadialSource& src, int n) {
  auto cut = gim::build_cutoffs(src.profile, n);
  auto grad = gim::radial_gradient(src.profile, cut.chi);
  std::ostringstream out;
  out << "r,chi,grad_squared\n";
  for (int r = 0; r <= src.profile.horizon; ++r)
    out << r << "," << gim::format_double(cut.chi.values[static_cast<size_t>(r)])
        << "," << gim::format_double(grad.squared[static_cast<size_t>(r)])
        << "\n";
  emit(g, out.str());
  std::cerr << (cut.support_closed
                    ? "support closes at radius " +
                          std::to_string(cut.support_radius)
                    : "support does not close within the horizon (truncated)")
            << "\n";
  return 0;
}

int cmd_radial_metric(const GlobalOpts& g, const RadialSource& src, int count) {
  auto family = gim::rescaled_cutoff_family(src.profile, count);
  if (!family.ok) {
    std::cerr << "normalization failed: " << family.note << "\n";
    return 2;
  }
  auto fb = gim::finite_ball_metric(src.profile, family.phis);
  std::vector<std::string> labels;
  for (int r = 0; r <= src.profile.horizon; ++r)
    labels.push_back("r" + std::to_string(r));
  emit(g, gim::write_metric_csv(fb.radial_table, labels));
  std::cerr << "gradient budget = " << gim::format_double(fb.gradient_budget)
            << (fb.normalization_ok ? " (<= 1)" : " (EXCEEDS 1)") << "\n";
  return fb.normalization_ok ? 0 : 2;
}

int cmd_radial_radialize(const GlobalOpts& g, const RadialSource& src,
                         const std::string& chi_file) {
  if (!src.graph)
    throw std::runtime_error("radialize needs a concrete graph (--input)");
  auto chi = read_values_file(chi_file);
  auto res = gim::radialize(*src.graph, src.profile, chi);
  std::ostringstream out;
  out << "r,phi,ray_vertex\n";
  for (int r = 0; r <= src.profile.horizon; ++r)
    out << r << "," << gim::format_double(res.phi.values[static_cast<size_t>(r)])
        << "," << res.ray[static_cast<size_t>(r)] << "\n";
  emit(g, out.str());
  return 0;
}

int cmd_generate(const GlobalOpts& g, const std::string& family,
                 const std::string& sizes, double alpha, int count,
                 double center_measure, const std::string& leaf_measures,
                 const std::string& edge_weights) {
  std::optional<gim::WeightedGraph> graph;
  if (family == "no-intrinsic") {
    graph = gim::make_no_intrinsic_example(count);
  } else if (family == "star") {
    std::vector<double> lm;
    if (leaf_measures.empty())
      lm.assign(static_cast<size_t>(count), 1.0);
    else
      for (long long s : parse_sizes(leaf_measures))
        lm.push_back(static_cast<double>(s));
    std::vector<double> ew;
    if (edge_weights.empty())
      ew.assign(lm.size(), 1.0);
    else
      for (long long s : parse_sizes(edge_weights))
        ew.push_back(static_cast<double>(s));
    graph = gim::make_star(lm, center_measure, ew);
  } else if (family == "tree" || family == "antitree") {
    std::vector<long long> sz = !sizes.empty()
                                    ? parse_sizes(sizes)
                                    : gim::polynomial_sphere_sizes(
                                          alpha > 0 ? alpha : 1.0, g.horizon);
    auto gen =
        family == "tree" ? gim::generate_tree(sz) : gim::generate_antitree(sz);
    graph = std::move(gen.graph);
  } else {
    throw CLI::ValidationError("unknown family: " + family);
  }
  emit(g, gim::write_graph_json(*graph));
  return 0;
}

int cmd_oracle_kappa(const GlobalOpts& g, int x, int y) {
  auto graph = load_graph(g);
  const double lower = gim::kappa_lower_bound_search(graph, x, y);
  gim::SolverOptions opt;
  opt.tol_solve = g.tol_solve;
  auto solver = gim::kappa_pair(graph, x, y, opt);
  json j;
  j["oracle_lower_bound"] = lower;
  j["solver_value"] = solver.value;
  j["difference"] = solver.value - lower;
  j["solver_converged"] = solver.report.converged;
  emit(g, j.dump(2) + "\n");
  return solver.report.converged ? 0 : 2;
}

int cmd_oracle_maximal(const GlobalOpts& g, const std::string& metric_path,
                       double delta) {
  auto graph = load_graph(g);
  auto metric = gim::read_metric_csv_file(metric_path);
  const bool maximal = gim::maximality_check_exhaustive(graph, metric, delta);
  json j;
  j["maximal"] = maximal;
  j["delta_grid"] = delta;
  emit(g, j.dump(2) + "\n");
  return 0;
}

int cmd_oracle_zseg(const GlobalOpts& g, const std::string& values_file,
                    bool exact) {
  auto graph = load_graph(g);
  auto f = read_values_file(values_file);
  auto res = gim::z_segment_maximal_family(graph, f, exact);
  json j;
  j["unit_gradient_condition"] = res.holds;
  j["exact"] = exact;
  if (!res.holds) j["failing_vertex"] = res.failing_vertex;
  emit(g, j.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"intrinsic pseudo metrics on weighted graphs"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOpts g;
  app.add_option("--input", g.input, "graph JSON file");
  app.add_option("--output", g.output, "write the main artifact here");
  app.add_option("--format", g.format, "output format: csv|json");
  app.add_option("--eps-feas", g.eps_feas, "intrinsic feasibility tolerance");
  app.add_option("--tol-solve", g.tol_solve, "convex solver tolerance");
  app.add_option("--tau-tri", g.tau_tri, "triangle inequality tolerance");
  app.add_option("--tau-rad", g.tau_rad, "radial constancy tolerance");
  app.add_option("--horizon", g.horizon, "truncation horizon for generators");

  auto* check = app.add_subcommand("check", "vertex loads of a metric");
  std::string metric_path;
  check->add_option("--metric", metric_path, "metric CSV file")->required();

  auto* kappa = app.add_subcommand("kappa", "canonical metric table");

  auto* maximal = app.add_subcommand("maximal", "a maximal intrinsic metric");
  std::string objective = "uniform";
  double objective_base = 0.01;
  std::string floor_kind = "zero";
  maximal->add_option("--objective", objective, "'uniform' or a pair 'i,j'");
  maximal->add_option("--objective-base", objective_base,
                      "weight of non-focused pairs");
  maximal->add_option("--floor", floor_kind, "'zero' or 'path'");

  auto* star = app.add_subcommand("star", "largest-metric decision");

  auto* radial =
      app.add_subcommand("radial", "weakly spherically symmetric machinery");
  radial->require_subcommand(1);
  bool want_tree = false, want_antitree = false;
  std::string sizes;
  double alpha = 0.0;
  int root = 0, cutoff_n = 0, family_count = 8;
  std::string chi_file;
  for (auto* sub :
       {radial->add_subcommand("profile", "radial profile table"),
        radial->add_subcommand("series", "series terms and verdict"),
        radial->add_subcommand("cutoffs", "cut-off function chi_n"),
        radial->add_subcommand("metric", "finite-ball radial metric"),
        radial->add_subcommand("radialize", "radialize a function")}) {
    sub->add_flag("--tree", want_tree, "generated tree source");
    sub->add_flag("--antitree", want_antitree, "generated antitree source");
    sub->add_option("--sizes", sizes, "sphere sizes, comma separated");
    sub->add_option("--alpha", alpha, "|S_r| = round((r+1)^alpha)");
    sub->add_option("--radii", g.horizon, "horizon for --alpha sources");
    sub->add_option("--root", root, "root vertex for --input sources");
    if (sub->get_name() == "cutoffs")
      sub->add_option("--n", cutoff_n, "cut-off index");
    if (sub->get_name() == "metric")
      sub->add_option("--count", family_count, "cutoff family size");
    if (sub->get_name() == "radialize")
      sub->add_option("--chi", chi_file, "file with one value per vertex")
          ->required();
  }

  auto* generate = app.add_subcommand("generate", "write example graphs");
  std::string family;
  int gen_count = 4;
  double center_measure = 1.0;
  std::string leaf_measures, edge_weights;
  generate->add_option("family", family, "star|tree|antitree|no-intrinsic")
      ->required();
  generate->add_option("--count", gen_count,
                       "N (no-intrinsic) or leaf count (star)");
  generate->add_option("--sizes", sizes, "sphere sizes for tree/antitree");
  generate->add_option("--alpha", alpha, "polynomial sphere growth");
  generate->add_option("--center-measure", center_measure, "star center m(p)");
  generate->add_option("--leaf-measures", leaf_measures, "comma separated");
  generate->add_option("--edge-weights", edge_weights, "comma separated");

  auto* oracle = app.add_subcommand("oracle", "brute-force verification");
  oracle->group("");  // test-support; hidden from help
  oracle->require_subcommand(1);
  auto* okappa = oracle->add_subcommand("kappa", "grid lower bound vs solver");
  int ox = 0, oy = 1;
  okappa->add_option("--x", ox)->required();
  okappa->add_option("--y", oy)->required();
  auto* omax = oracle->add_subcommand("maximal-check", "exhaustive maximality");
  double odelta = 1e-4;
  std::string ometric;
  omax->add_option("--metric", ometric)->required();
  omax->add_option("--delta", odelta);
  auto* ozseg = oracle->add_subcommand("zseg", "unit-gradient identity");
  std::string ozf;
  bool ozexact = false;
  ozseg->add_option("--f", ozf, "file with one value per vertex")->required();
  ozseg->add_flag("--exact", ozexact, "exact rational comparison");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*check) return cmd_check(g, metric_path);
    if (*kappa) return cmd_kappa(g);
    if (*maximal) return cmd_maximal(g, objective, objective_base, floor_kind);
    if (*star) return cmd_star(g);
    if (*radial) {
      auto src =
          resolve_radial_source(g, want_tree, want_antitree, sizes, alpha, root);
      if (*radial->get_subcommand("profile")) return cmd_radial_profile(g, src);
      if (*radial->get_subcommand("series")) return cmd_radial_series(g, src);
      if (*radial->get_subcommand("cutoffs"))
        return cmd_radial_cutoffs(g, src, cutoff_n);
      if (*radial->get_subcommand("metric"))
        return cmd_radial_metric(g, src, family_count);
      if (*radial->get_subcommand("radialize"))
        return cmd_radial_radialize(g, src, chi_file);
    }
    if (*generate)
      return cmd_generate(g, family, sizes, alpha, gen_count, center_measure,
                          leaf_measures, edge_weights);
    if (*oracle) {
      if (*oracle->get_subcommand("kappa")) return cmd_oracle_kappa(g, ox, oy);
      if (*oracle->get_subcommand("maximal-check"))
        return cmd_oracle_maximal(g, ometric, odelta);
      if (*oracle->get_subcommand("zseg"))
        return cmd_oracle_zseg(g, ozf, ozexact);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
