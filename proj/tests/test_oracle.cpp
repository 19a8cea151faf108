#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "gim/kappa.hpp"
#include "gim/maximal.hpp"
#include "gim/metric_kit.hpp"
#include "gim/oracle.hpp"
#include "gim/star.hpp"

using namespace gim;

TEST_CASE("kappa_lower_bound_search") {
  SUBCASE("two-vertex unit graph") {
    auto g = fixtures::path_graph(2);
    const double lb = kappa_lower_bound_search(g, 0, 1);
    CHECK(lb == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(lb <= 1.0);  // exact-feasibility grid points never overshoot
  }
  SUBCASE("unit triangle") {
    auto g = fixtures::unit_triangle();
    const double lb = kappa_lower_bound_search(g, 0, 1);
    CHECK(lb == doctest::Approx(2.0 / std::sqrt(5.0)).epsilon(2e-3));
  }
  SUBCASE("scaling m by 4 doubles the bound exactly") {
    auto g = fixtures::cycle_graph(4);
    auto g4 = fixtures::with_measures(g, {4, 4, 4, 4});
    const double a = kappa_lower_bound_search(g, 0, 2);
    const double b = kappa_lower_bound_search(g4, 0, 2);
    CHECK(b == doctest::Approx(2.0 * a).epsilon(1e-9));
  }
  SUBCASE("size guard") {
    CHECK_THROWS(kappa_lower_bound_search(fixtures::path_graph(7), 0, 6));
  }
}

TEST_CASE("oracle is a sound lower bound and agrees with the solver") {
  std::vector<WeightedGraph> fixtures_set;
  fixtures_set.push_back(fixtures::path_graph(4));
  fixtures_set.push_back(fixtures::cycle_graph(5));
  fixtures_set.push_back(fixtures::complete_graph(4));
  fixtures_set.push_back(make_star({1.0, 0.5, 2.0}, 1.5, {1.0, 2.0, 0.5}));
  fixtures_set.push_back(
      fixtures::with_measures(fixtures::path_graph(5), {0.5, 1, 2, 1, 0.5}));
  for (const auto& g : fixtures_set) {
    const int n = g.vertex_count();
    for (int x = 0; x < n; ++x) {
      for (int y = x + 1; y < n; ++y) {
        const double lb = kappa_lower_bound_search(g, x, y);
        const auto solved = kappa_pair(g, x, y);
        CHECK(lb <= solved.value + 1e-8);
        CHECK(std::abs(solved.value - lb) <= 1e-3);
      }
    }
  }
}

TEST_CASE("maximality_check_exhaustive") {
  SUBCASE("kappa on a compliant star is maximal") {
    auto star = make_star({1.0, 1.0}, 2.0, {1, 1});
    auto km = kappa_matrix(star);
    CHECK(maximality_check_exhaustive(star, km, 1e-4));
  }
  SUBCASE("the zero metric is never maximal when an edge exists") {
    auto g = fixtures::path_graph(3);
    CHECK_FALSE(maximality_check_exhaustive(g, PseudoMetric(3), 1e-4));
  }
  SUBCASE("maximal_metric output on P4 passes at delta 1e-4") {
    auto p4 = fixtures::path_graph(4);
    PseudoMetric zero(4);
    for (auto obj : {ObjectiveWeights::uniform(4),
                     ObjectiveWeights::concentrated(4, 0, 1),
                     ObjectiveWeights::concentrated(4, 1, 2)}) {
      auto res = maximal_metric(p4, zero, obj);
      CHECK(maximality_check_exhaustive(p4, res.metric, 1e-4));
    }
  }
  SUBCASE("size guard") {
    CHECK_THROWS(
        maximality_check_exhaustive(fixtures::path_graph(6), PseudoMetric(6), 1e-4));
  }
}

TEST_CASE("z_segment_maximal_family") {
  auto seg = fixtures::path_graph(6);

  SUBCASE("f(n) = n/sqrt(2) satisfies the identity up to float tolerance") {
    std::vector<double> f(6);
    for (int i = 0; i < 6; ++i) f[static_cast<size_t>(i)] = i / std::sqrt(2.0);
    CHECK(z_segment_maximal_family(seg, f, /*exact=*/false).holds);
    // in exact rational arithmetic the double 1/sqrt(2) is not a solution:
    // its square differs from 1/2 by one ulp worth of rational mass
    CHECK_FALSE(z_segment_maximal_family(seg, f, /*exact=*/true).holds);
  }

  SUBCASE("f(n) = n fails: 1 + 1 != 1") {
    std::vector<double> f{0, 1, 2, 3, 4, 5};
    auto res = z_segment_maximal_family(seg, f, true);
    CHECK_FALSE(res.holds);
    CHECK(res.failing_vertex == 1);
    CHECK_FALSE(z_segment_maximal_family(seg, f, false).holds);
  }

  SUBCASE("dyadic plateau zigzag passes exactly") {
    // 0,1,1,0,0,1: every interior vertex has one equal neighbor and one at
    // distance 1, so the identity holds in exact arithmetic
    std::vector<double> f{0, 1, 1, 0, 0, 1};
    CHECK(z_segment_maximal_family(seg, f, true).holds);
  }

  SUBCASE("half-amplitude zigzag fails exactly at 1/4 + 1/4") {
    std::vector<double> f{0, 0.5, 0, 0.5, 0, 0.5};
    auto res = z_segment_maximal_family(seg, f, true);
    CHECK_FALSE(res.holds);
    CHECK(res.failing_vertex == 1);
  }

  SUBCASE("shape errors") {
    CHECK_THROWS(z_segment_maximal_family(fixtures::cycle_graph(4),
                                          {0, 1, 0, 1}, true));
    CHECK_THROWS(z_segment_maximal_family(
        fixtures::path_graph(4, 2.0), {0, 1, 0, 1}, true));  // b != 1
    CHECK_THROWS(z_segment_maximal_family(seg, {0, 1}, true));
  }
}

TEST_CASE("sigma_f of the unit-gradient family is verified intrinsic") {
  auto seg = fixtures::path_graph(6);
  std::vector<double> f(6);
  for (int i = 0; i < 6; ++i) f[static_cast<size_t>(i)] = i / std::sqrt(2.0);
  auto sigma = metric_from_function(f);
  auto loads = vertex_loads(seg, sigma);
  CHECK(loads.is_intrinsic());
  // interior loads sit exactly on the boundary: the family is tight
  for (int v = 1; v < 5; ++v)
    CHECK(loads.load[static_cast<size_t>(v)] == doctest::Approx(1.0));
}
