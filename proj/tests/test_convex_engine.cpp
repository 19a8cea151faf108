#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "gim/kappa.hpp"
#include "gim/maximal.hpp"
#include "gim/metric_kit.hpp"
#include "gim/perturbation.hpp"

using namespace gim;

TEST_CASE("kappa_pair closed cases") {
  SUBCASE("two-vertex unit graph") {
    auto g = fixtures::path_graph(2);
    auto r = kappa_pair(g, 0, 1);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(r.report.converged);
    CHECK(r.report.gap_bound <= 1e-8);
  }
  SUBCASE("star leaf formula (m(x) ^ m(p)) / b") {
    WeightedGraph g(2, {{0, 1, 4.0}}, {9.0, 1.0});
    auto r = kappa_pair(g, 1, 0);
    CHECK(r.value == doctest::Approx(0.5).epsilon(1e-7));
  }
  SUBCASE("unit triangle: 2/sqrt(5), binding symmetric constraint") {
    auto g = fixtures::unit_triangle();
    auto r = kappa_pair(g, 0, 1);
    CHECK(r.value == doctest::Approx(2.0 / std::sqrt(5.0)).epsilon(1e-7));
    auto grad = gradient_norm(g, r.witness);
    for (double v : grad) CHECK(v <= 1.0 + kDefaultEpsFeas);
    CHECK(r.witness[0] - r.witness[1] == doctest::Approx(r.value));
    // the optimizer is the symmetric ansatz f = (a, -a, ~0) with 5a^2 = 1
    const double a = 1.0 / std::sqrt(5.0);
    CHECK(r.witness[0] - r.witness[2] == doctest::Approx(a).epsilon(1e-3));
  }
}

TEST_CASE("kappa_pair error paths") {
  auto g = fixtures::path_graph(3);
  CHECK_THROWS(kappa_pair(g, 1, 1));
  WeightedGraph disconnected(4, {{0, 1, 1.0}, {2, 3, 1.0}}, {1, 1, 1, 1});
  CHECK_THROWS(kappa_pair(disconnected, 0, 2));
  CHECK_THROWS(kappa_matrix(disconnected));
}

TEST_CASE("kappa_matrix on the compliant star and the triangle") {
  auto star = make_star({1.0, 1.0}, 2.0, {1.0, 1.0});
  KappaMatrixReport rep;
  auto km = kappa_matrix(star, {}, &rep);
  CHECK(rep.all_converged);
  CHECK(km(0, 1) == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(km(1, 2) == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(vertex_loads(star, km).is_intrinsic());
  CHECK(rep.worst_triangle_excess == 0.0);

  auto tri = fixtures::unit_triangle();
  auto kt = kappa_matrix(tri);
  auto loads = vertex_loads(tri, kt);
  CHECK(loads.max_load > 1.0 + 10 * kDefaultEpsFeas);  // kappa not intrinsic
  CHECK(loads.max_load == doctest::Approx(1.6).epsilon(1e-6));
}

TEST_CASE("kappa_matrix is identical for any thread count") {
  auto g = fixtures::cycle_graph(5);
  auto serial = kappa_matrix(g, {}, nullptr, 1);
  auto threaded = kappa_matrix(g, {}, nullptr, 4);
  CHECK(max_abs_difference(serial, threaded) == 0.0);
}

TEST_CASE("kappa dominates sampled intrinsic metrics and is below d_s") {
  std::mt19937 rng(21);
  for (auto g : {fixtures::unit_triangle(), fixtures::path_graph(4),
                 fixtures::cycle_graph(4), make_star({1, 2}, 4.0, {1, 1}),
                 make_no_intrinsic_example(6)}) {
    auto km = kappa_matrix(g);
    auto ds = universal_bound_metric(g);
    CHECK(dominated_by(km, ds, 1e-8));
    // the computed table undershoots the true supremum by at most the gap,
    // so tol_solve of slack absorbs it
    for (int k = 0; k < 200; ++k) {
      auto sf = fixtures::random_function_metric(g, rng);
      CHECK(dominated_by(sf, km, 1e-8));
    }
  }
}

TEST_CASE("kappa scaling covariance: m -> t^2 m scales values by t") {
  auto g = fixtures::cycle_graph(4);
  auto g4 = fixtures::with_measures(g, {4, 4, 4, 4});
  auto base = kappa_pair(g, 0, 2);
  auto scaled = kappa_pair(g4, 0, 2);
  CHECK(scaled.value == doctest::Approx(2.0 * base.value).epsilon(1e-7));
}

TEST_CASE("maximal_metric on stars reproduces kappa for any objective") {
  auto star = make_star({1.0, 0.5, 0.25}, 2.0, {1.0, 2.0, 0.5});
  auto km = kappa_matrix(star);
  PseudoMetric zero(star.vertex_count());
  for (auto obj : {ObjectiveWeights::uniform(4),
                   ObjectiveWeights::concentrated(4, 0, 1),
                   ObjectiveWeights::concentrated(4, 2, 3, 0.1)}) {
    auto res = maximal_metric(star, zero, obj);
    CHECK(res.report.converged);
    CHECK(res.certificate_passed);
    CHECK(max_abs_difference(res.metric, km) <= 1e-7);
  }
}

TEST_CASE("maximal_metric on P4: distinct objectives reach distinct maximal metrics") {
  auto p4 = fixtures::path_graph(4);
  PseudoMetric zero(4);
  auto side = maximal_metric(p4, zero, ObjectiveWeights::concentrated(4, 0, 1));
  auto middle = maximal_metric(p4, zero, ObjectiveWeights::concentrated(4, 1, 2));
  for (const auto& r : {side, middle}) {
    CHECK(r.report.converged);
    CHECK(r.certificate_passed);
    CHECK(vertex_loads(p4, r.metric).is_intrinsic());
    CHECK_FALSE(r.metric.check_triangles().has_value());
  }
  CHECK(max_abs_difference(side.metric, middle.metric) > 1e-3);

  SUBCASE("their max is not intrinsic (non-uniqueness witness)") {
    auto combined = max_combine(side.metric, middle.metric);
    CHECK_FALSE(vertex_loads(p4, combined).is_intrinsic());
  }
}

TEST_CASE("maximal_metric respects a path-metric floor") {
  for (auto g : {fixtures::path_graph(4), make_star({1, 1, 1}, 5.0, {1, 1, 1}),
                 fixtures::cycle_graph(4)}) {
    auto floor_metric = path_metric(g, default_intrinsic_weighting(g));
    auto res = maximal_metric(g, floor_metric,
                              ObjectiveWeights::uniform(g.vertex_count()));
    CHECK(dominated_by(floor_metric, res.metric, 1e-12));
    CHECK(vertex_loads(g, res.metric).is_intrinsic());
    CHECK(res.certificate_passed);
  }
}

TEST_CASE("maximal_metric rejects a non-intrinsic floor") {
  auto g = fixtures::path_graph(3);
  PseudoMetric bad(3);
  bad.set(0, 1, 2.0);
  bad.set(1, 2, 2.0);
  bad.set(0, 2, 4.0);
  CHECK_THROWS(maximal_metric(g, bad, ObjectiveWeights::uniform(3)));
}

TEST_CASE("max-closure: intrinsic maxima on stars, violations off stars") {
  std::mt19937 rng(31);
  auto star = make_star({1.0, 1.0}, 2.0, {1.0, 1.0});
  for (int k = 0; k < 200; ++k) {
    auto a = fixtures::random_function_metric(star, rng);
    auto b = fixtures::random_function_metric(star, rng);
    CHECK(vertex_loads(star, max_combine(a, b)).is_intrinsic());
  }

  // triangle and P4: maximal metrics under different objectives collide
  auto tri = fixtures::unit_triangle();
  PseudoMetric zero3(3);
  auto ta = maximal_metric(tri, zero3, ObjectiveWeights::concentrated(3, 0, 1));
  auto tb = maximal_metric(tri, zero3, ObjectiveWeights::concentrated(3, 1, 2));
  CHECK_FALSE(
      vertex_loads(tri, max_combine(ta.metric, tb.metric)).is_intrinsic());
}

TEST_CASE("perturbation_witness") {
  SUBCASE("star graphs have no qualifying edge pair") {
    auto star = make_star({1, 1, 1}, 3.0, {1, 1, 1});
    CHECK_FALSE(perturbation_witness(star, kappa_matrix(star)).has_value());
    WeightedGraph single_edge(2, {{0, 1, 1.0}}, {1, 1});
    CHECK_FALSE(
        perturbation_witness(single_edge, kappa_matrix(single_edge)).has_value());
  }

  SUBCASE("triangle with the true kappa: the displays certify non-intrinsicness") {
    auto tri = fixtures::unit_triangle();
    auto km = kappa_matrix(tri);
    auto wit = perturbation_witness(tri, km);
    REQUIRE(wit.has_value());
    CHECK(wit->x == 0);
    CHECK(wit->y == 1);
    CHECK(wit->s == doctest::Approx(2.0 / std::sqrt(5.0)).epsilon(1e-6));
    // kappa is not intrinsic on the triangle, so no eps can satisfy the two
    // load displays; their failure is exactly the proof's contradiction.
    CHECK_FALSE(wit->displays_hold);
    CHECK(vertex_loads(tri, km).max_load > 1.0);
  }

  SUBCASE("P4 with kappa_matrix: same certificate") {
    auto p4 = fixtures::path_graph(4);
    auto km = kappa_matrix(p4);
    auto wit = perturbation_witness(p4, km);
    REQUIRE(wit.has_value());
    CHECK(wit->x == 1);
    CHECK(wit->y == 2);
    CHECK_FALSE(wit->displays_hold);
    CHECK(vertex_loads(p4, km).max_load > 1.0);
  }

  SUBCASE("an intrinsic input is strictly exceeded by the intrinsic d_w") {
    auto tri = fixtures::unit_triangle();
    const double t = 1.0 / std::sqrt(5.0);
    auto sigma = metric_from_function({2 * t, 0, t});  // intrinsic kappa witness
    REQUIRE(vertex_loads(tri, sigma).is_intrinsic());
    auto wit = perturbation_witness(tri, sigma);
    REQUIRE(wit.has_value());
    CHECK(wit->displays_hold);
    CHECK(wit->d_w_intrinsic);
    CHECK(wit->exceeds_input());
    CHECK(wit->d_w_xy >= wit->input_xy + wit->epsilon - 1e-12);
  }
}

TEST_CASE("solver reports carry certificates") {
  auto g = fixtures::cycle_graph(5);
  auto r = kappa_pair(g, 0, 2);
  CHECK(r.report.converged);
  CHECK(r.report.max_violation <= 1e-8);
  CHECK(r.report.stationarity <= 1e-8);
  CHECK(r.report.iterations > 0);
}

TEST_CASE("certificates hold on a badly scaled dense graph") {
  // weights ~ 1e-3 against measures down to 1/13824 stress the barrier
  auto g = make_no_intrinsic_example(24);
  KappaMatrixReport rep;
  auto km = kappa_matrix(g, {}, &rep);
  CHECK(rep.all_converged);
  CHECK(rep.nonconverged_pairs.empty());
  CHECK(dominated_by(km, universal_bound_metric(g), 1e-8));
}

TEST_CASE("a fully pinned floor is returned unchanged") {
  // default path metric on P3 saturates the interior vertex; the upper
  // bounds sandwich every remaining pair, so the floor is the unique
  // feasible metric
  auto p3 = fixtures::path_graph(3);
  auto floor_metric = path_metric(p3, default_intrinsic_weighting(p3));
  auto res = maximal_metric(p3, floor_metric, ObjectiveWeights::uniform(3));
  CHECK(res.pinned_pairs == 3);
  CHECK(res.report.converged);
  CHECK(max_abs_difference(res.metric, floor_metric) == 0.0);
  CHECK(res.certificate_passed);
}
