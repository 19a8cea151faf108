#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "gim/metric_kit.hpp"
#include "gim/radial.hpp"

using namespace gim;

TEST_CASE("detect_radial_symmetry") {
  SUBCASE("unit star from the center") {
    auto star = make_star({1, 1, 1, 1}, 1.0, {1, 1, 1, 1});
    auto det = detect_radial_symmetry(star, 0);
    REQUIRE(det.ok());
    const auto& p = *det.profile;
    CHECK(p.horizon == 1);
    CHECK(p.sphere_mass == std::vector<double>{1, 4});
    CHECK(p.kappa_plus[0] == 4.0);
    CHECK(p.kappa_minus[1] == 1.0);
  }
  SUBCASE("antitree with |S_r| = (r+1)^2") {
    auto gen = generate_antitree({1, 4, 9, 16});
    auto det = detect_radial_symmetry(gen.graph, 0);
    REQUIRE(det.ok());
    const auto& p = *det.profile;
    for (int r = 0; r < 3; ++r) {
      CHECK(p.kappa_plus[static_cast<size_t>(r)] ==
            doctest::Approx(std::pow(r + 2.0, 2)));
      CHECK(p.kappa_plus[static_cast<size_t>(r)] ==
            gen.profile.kappa_plus[static_cast<size_t>(r)]);
    }
    for (int r = 1; r <= 3; ++r)
      CHECK(p.kappa_minus[static_cast<size_t>(r)] ==
            doctest::Approx(std::pow(r, 2)));
  }
  SUBCASE("P4 from an interior vertex fails") {
    auto det = detect_radial_symmetry(fixtures::path_graph(4), 1);
    CHECK_FALSE(det.ok());
    REQUIRE(det.failure.has_value());
    CHECK(det.failure->radius == 1);  // S_1 = {0, 2}: only one continues out
  }
  SUBCASE("a star with unequal leaf data is not radially symmetric") {
    auto star = make_star({1.0, 2.0}, 1.0, {1.0, 1.0});
    auto det = detect_radial_symmetry(star, 0);
    CHECK_FALSE(det.ok());  // kappa_- differs across S_1: 1/1 vs 1/2
    CHECK(det.failure->radius == 1);
  }
  SUBCASE("detection requires connectivity") {
    WeightedGraph g(4, {{0, 1, 1.0}, {2, 3, 1.0}}, {1, 1, 1, 1});
    CHECK_THROWS(detect_radial_symmetry(g, 0));
  }
}

TEST_CASE("boundary identity is exact on generated and detected profiles") {
  for (auto gen : {generate_antitree({1, 4, 9, 16, 25}),
                   generate_tree({1, 2, 4, 8, 16}),
                   generate_antitree({1, 1, 1, 1, 1})}) {
    const auto& p = gen.profile;
    for (int r = 0; r + 1 <= p.horizon; ++r) {
      CHECK(p.kappa_plus[static_cast<size_t>(r)] *
                p.sphere_mass[static_cast<size_t>(r)] ==
            p.kappa_minus[static_cast<size_t>(r + 1)] *
                p.sphere_mass[static_cast<size_t>(r + 1)]);
    }
    auto det = detect_radial_symmetry(gen.graph, 0);
    REQUIRE(det.ok());
    for (int r = 0; r + 1 <= p.horizon; ++r)
      CHECK(det.profile->boundary(r) == p.boundary(r));
  }
}

TEST_CASE("radial_gradient") {
  SUBCASE("constant function has zero gradient") {
    auto gen = generate_antitree({1, 4, 9});
    RadialFunction f{{2, 2, 2}};
    auto grad = radial_gradient(gen.profile, f);
    for (double v : grad.squared) CHECK(v == 0.0);
  }
  SUBCASE("two-sided unit chain with f(r) = r gives 2 in the interior") {
    auto gen = generate_tree({1, 1, 1, 1, 1});  // half-line: kappa_pm = 1
    RadialFunction f{{0, 1, 2, 3, 4}};
    auto grad = radial_gradient(gen.profile, f);
    for (int r = 1; r < 4; ++r)
      CHECK(grad.squared[static_cast<size_t>(r)] == doctest::Approx(2.0));
    CHECK(grad.squared[0] == doctest::Approx(1.0));  // forward only
    CHECK(grad.partial_at_horizon);
  }
  SUBCASE("lifted radial functions match gradient_norm on the graph") {
    auto gen = generate_antitree({1, 4, 9, 16});
    auto depths = bfs_depths(gen.graph, 0);
    RadialFunction f{{1.0, 0.6, 0.3, 0.1}};
    auto radial = radial_gradient(gen.profile, f);
    auto lifted = lift_to_graph(depths, f);
    auto grad = gradient_norm(gen.graph, lifted);
    for (int v = 0; v < gen.graph.vertex_count(); ++v) {
      const int r = depths[static_cast<size_t>(v)];
      if (r == gen.profile.horizon) continue;  // partial at the horizon
      CHECK(grad[static_cast<size_t>(v)] * grad[static_cast<size_t>(v)] ==
            doctest::Approx(radial.squared[static_cast<size_t>(r)])
                .epsilon(1e-12));
    }
  }
  SUBCASE("horizon mismatch throws") {
    auto gen = generate_antitree({1, 4});
    CHECK_THROWS(radial_gradient(gen.profile, RadialFunction{{1, 2, 3}}));
  }
}

TEST_CASE("series_terms") {
  SUBCASE("trees: term (iii) = sqrt(|S_r| / |S_{r+1}|) exactly") {
    auto gen = generate_tree({1, 2, 4, 8, 16, 32});
    auto st = series_terms(gen.profile);
    for (size_t k = 0; k < st.term_iii.size(); ++k) {
      const double sr = gen.profile.sphere_mass[k + 1];
      const double sr1 = gen.profile.sphere_mass[k + 2];
      CHECK(st.term_iii[k] ==
            doctest::Approx(std::sqrt(sr / sr1)).epsilon(1e-15));
      // |dB_r| = |S_{r+1}| on trees, so the two criteria coincide
      CHECK(st.term_v[k] == doctest::Approx(st.term_iii[k]).epsilon(1e-15));
    }
  }
  SUBCASE("antitrees: term (iii) = 1 / sqrt(max of adjacent spheres)") {
    auto gen = generate_antitree({1, 4, 9, 16, 25});
    auto st = series_terms(gen.profile);
    for (size_t k = 0; k < st.term_iii.size(); ++k) {
      const double sr = gen.profile.sphere_mass[k + 1];
      const double sr1 = gen.profile.sphere_mass[k + 2];
      CHECK(st.term_iii[k] ==
            doctest::Approx(1.0 / std::sqrt(std::max(sr, sr1))));
    }
  }
  SUBCASE("half-line: both terms are 1") {
    auto gen = generate_tree({1, 1, 1, 1});
    auto st = series_terms(gen.profile);
    for (double t : st.term_iii) CHECK(t == 1.0);
    for (double t : st.term_v) CHECK(t == 1.0);
  }
}

TEST_CASE("partial sums of criterion iii grow like log on the alpha=2 antitree") {
  auto p = antitree_profile(2.0, 1000);
  auto st = series_terms(p);
  // terms are 1/(r+2): the running sum is H_{R+1} - 3/2 (~5.99 at R = 1000)
  CHECK(st.partial_iii.back() > 5.5);
  CHECK(st.partial_iii.back() < 6.5);
  auto half = series_terms(antitree_profile(2.0, 500));
  CHECK(st.partial_iii.back() - half.partial_iii.back() ==
        doctest::Approx(std::log(2.0)).epsilon(0.01));
}

TEST_CASE("classify_divergence") {
  CHECK(classify_divergence(antitree_profile(2.0, 200)).criterion_iii ==
        DivergenceVerdict::kDiverges);
  CHECK(classify_divergence(antitree_profile(3.0, 200)).criterion_iii ==
        DivergenceVerdict::kConverges);
  CHECK(classify_divergence(antitree_profile(1.0, 200)).criterion_v ==
        DivergenceVerdict::kDiverges);
  CHECK(classify_divergence(tree_profile_stretched(1.0, 40)).criterion_iii ==
        DivergenceVerdict::kDiverges);
  CHECK(classify_divergence(tree_profile_stretched(1.5, 20)).criterion_iii ==
        DivergenceVerdict::kConverges);
  CHECK(classify_divergence(tree_profile_polynomial(2.0, 100)).criterion_iii ==
        DivergenceVerdict::kDiverges);

  SUBCASE("numeric-only profiles stay undetermined") {
    auto gen = generate_antitree({1, 4, 9, 16});
    auto rep = classify_divergence(gen.profile);
    CHECK(rep.criterion_iii == DivergenceVerdict::kUndetermined);
    CHECK(rep.partial_sum_iii > 0.0);
    CHECK(rep.explanation.find("undetermined") != std::string::npos);
  }
}

TEST_CASE("build_cutoffs") {
  SUBCASE("n at or beyond the horizon leaves chi at 1") {
    auto p = antitree_profile(2.0, 20);
    auto cut = build_cutoffs(p, 25);
    for (double v : cut.chi.values) CHECK(v == 1.0);
    CHECK_FALSE(cut.support_closed);
  }
  SUBCASE("half-line with n = 0: chi = (1, 0, 0, ...)") {
    auto gen = generate_tree({1, 1, 1, 1, 1});
    auto cut = build_cutoffs(gen.profile, 0);
    CHECK(cut.chi.values[0] == 1.0);
    for (size_t r = 1; r < cut.chi.values.size(); ++r)
      CHECK(cut.chi.values[r] == 0.0);
    CHECK(cut.support_closed);
    CHECK(cut.support_radius == 1);
  }
  SUBCASE("alpha = 2 antitree at horizon 10^4: support closes, gradient <= 2") {
    auto p = antitree_profile(2.0, 10000);
    auto cut = build_cutoffs(p, 10);
    CHECK(cut.support_closed);
    CHECK(cut.support_radius < 10000);
    CHECK(cut.chi.values[10] == 1.0);  // r <= n untouched
    auto grad = radial_gradient(p, cut.chi);
    for (double v : grad.squared) CHECK(v <= 2.0 + 1e-12);
    for (size_t r = 1; r < cut.chi.values.size(); ++r) {
      CHECK(cut.chi.values[r] <= cut.chi.values[r - 1]);  // nonincreasing
      CHECK(cut.chi.values[r] >= 0.0);
      CHECK(cut.chi.values[r] <= 1.0);
    }
  }
  SUBCASE("monotone in n and pointwise convergence to 1") {
    auto p = antitree_profile(2.0, 300);
    auto c2 = build_cutoffs(p, 2);
    auto c5 = build_cutoffs(p, 5);
    for (size_t r = 0; r < c2.chi.values.size(); ++r)
      CHECK(c2.chi.values[r] <= c5.chi.values[r] + 1e-15);
    // for fixed r, chi_n(r) = 1 once n >= r
    auto c9 = build_cutoffs(p, 9);
    for (int r = 0; r <= 9; ++r)
      CHECK(c9.chi.values[static_cast<size_t>(r)] == 1.0);
  }
}

TEST_CASE("rescaled_cutoff_family and finite_ball_metric") {
  SUBCASE("single cutoff reproduces the function-induced metric") {
    auto gen = generate_tree({1, 1, 1, 1, 1});
    auto cut = build_cutoffs(gen.profile, 0);
    // scale to unit sup gradient: |grad chi_0|^2 <= 2 here
    RadialFunction phi;
    for (double v : cut.chi.values)
      phi.values.push_back(1.0 - (1.0 - v) / std::sqrt(2.0));
    auto fb = finite_ball_metric(gen.profile, {phi});
    CHECK(fb.normalization_ok);
    for (int r = 0; r <= 4; ++r)
      for (int s = r + 1; s <= 4; ++s)
        CHECK(fb.radial_table(r, s) ==
              doctest::Approx(std::abs(phi.values[static_cast<size_t>(r)] -
                                       phi.values[static_cast<size_t>(s)])));
  }

  SUBCASE("alpha = 2: rescaled family is intrinsic on the truncation") {
    auto gen = generate_antitree(polynomial_sphere_sizes(2.0, 14));
    auto family = rescaled_cutoff_family(gen.profile, 3);
    REQUIRE(family.ok);
    auto fb = finite_ball_metric(gen.profile, family.phis);
    CHECK(fb.normalization_ok);
    CHECK(fb.gradient_budget <= 1.0 + 1e-12);

    // lift sigma(o,.) and the full radial table to the concrete graph
    auto depths = bfs_depths(gen.graph, 0);
    const int n = gen.graph.vertex_count();
    PseudoMetric lifted(n);
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        lifted.set(u, v, fb.radial_table(depths[static_cast<size_t>(u)],
                                         depths[static_cast<size_t>(v)]));
    CHECK(vertex_loads(gen.graph, lifted).is_intrinsic());
    // sigma(o,.) is radially symmetric by construction and nondecreasing
    for (int r = 1; r <= gen.profile.horizon; ++r)
      CHECK(fb.radial_table(0, r) >= fb.radial_table(0, r - 1) - 1e-15);
  }

  SUBCASE("alpha = 3: the analogous construction fails normalization") {
    auto p = antitree_profile(3.0, 2000);
    auto family = rescaled_cutoff_family(p, 8);
    CHECK_FALSE(family.ok);
    CHECK(family.note.find("does not close") != std::string::npos);
  }
}

TEST_CASE("radialize") {
  SUBCASE("radially symmetric chi is reproduced exactly") {
    auto gen = generate_antitree({1, 3, 5, 7});
    auto depths = bfs_depths(gen.graph, 0);
    RadialFunction f{{1.0, 0.7, 0.2, 0.0}};
    auto chi = lift_to_graph(depths, f);
    auto res = radialize(gen.graph, gen.profile, chi);
    for (int r = 0; r <= 3; ++r)
      CHECK(res.phi.values[static_cast<size_t>(r)] ==
            f.values[static_cast<size_t>(r)]);
  }
  SUBCASE("forward bound kappa_+(r) (phi(r) - phi(r+1))^2 <= C^2") {
    auto gen = generate_antitree({1, 3, 5, 7, 9});
    auto depths = bfs_depths(gen.graph, 0);
    const int n = gen.graph.vertex_count();
    // a non-radial finitely supported chi
    std::vector<double> chi(static_cast<size_t>(n), 0.0);
    for (int v = 0; v < n; ++v)
      chi[static_cast<size_t>(v)] =
          depths[static_cast<size_t>(v)] <= 1 ? 1.0 : (v % 3 == 0 ? 0.4 : 0.1);
    double C2 = 0.0;
    for (double gv : gradient_norm(gen.graph, chi)) C2 = std::max(C2, gv * gv);
    auto res = radialize(gen.graph, gen.profile, chi);
    for (int r = 0; r + 1 <= gen.profile.horizon; ++r) {
      const double d = res.phi.values[static_cast<size_t>(r)] -
                       res.phi.values[static_cast<size_t>(r + 1)];
      CHECK(gen.profile.kappa_plus[static_cast<size_t>(r)] * d * d <=
            C2 + 1e-12);
    }
    // Remark's weaker two-sided bound |grad phi|^2 <= C^2 (1 + m(S_{r-1})/m(S_r))
    auto grad = radial_gradient(gen.profile, res.phi);
    for (int r = 1; r < gen.profile.horizon; ++r) {
      const double ratio = gen.profile.sphere_mass[static_cast<size_t>(r - 1)] /
                           gen.profile.sphere_mass[static_cast<size_t>(r)];
      CHECK(grad.squared[static_cast<size_t>(r)] <= C2 * (1.0 + ratio) + 1e-12);
    }
  }
  SUBCASE("profile/graph mismatch throws") {
    auto gen = generate_antitree({1, 3, 5});
    auto other = generate_antitree({1, 4, 9});
    std::vector<double> chi(static_cast<size_t>(gen.graph.vertex_count()), 1.0);
    CHECK_THROWS(radialize(gen.graph, other.profile, chi));
  }
}

TEST_CASE("generate_tree") {
  auto gen = generate_tree({1, 2, 4, 8});
  CHECK(gen.graph.vertex_count() == 15);
  CHECK(gen.profile.kappa_plus[0] == 2.0);
  CHECK(gen.profile.kappa_plus[1] == 2.0);
  CHECK(gen.profile.kappa_plus[2] == 2.0);
  for (int r = 0; r < 3; ++r)
    CHECK(gen.profile.boundary(r) ==
          gen.profile.sphere_mass[static_cast<size_t>(r + 1)]);
  CHECK(detect_radial_symmetry(gen.graph, 0).ok());

  auto half = generate_tree({1, 1, 1, 1});
  for (int r = 0; r < 3; ++r) CHECK(half.profile.kappa_plus[static_cast<size_t>(r)] == 1.0);

  CHECK_NOTHROW(generate_tree({1, 3, 6}));
  CHECK_THROWS(generate_tree({1, 2, 3}));  // 3 mod 2 != 0
  CHECK_THROWS(generate_tree({1, 2, 1}));  // decreasing
  CHECK_THROWS(generate_tree({2, 4}));     // root sphere must be a single vertex
}

TEST_CASE("generate_antitree") {
  auto gen = generate_antitree({1, 4, 9});
  CHECK(gen.profile.boundary(0) == 4.0);
  CHECK(gen.profile.boundary(1) == 36.0);
  auto det = detect_radial_symmetry(gen.graph, 0);
  REQUIRE(det.ok());
  for (int r = 0; r <= 2; ++r) {
    CHECK(det.profile->kappa_plus[static_cast<size_t>(r)] ==
          gen.profile.kappa_plus[static_cast<size_t>(r)]);
    CHECK(det.profile->kappa_minus[static_cast<size_t>(r)] ==
          gen.profile.kappa_minus[static_cast<size_t>(r)]);
  }

  auto half = generate_antitree({1, 1, 1});
  CHECK(half.profile.kappa_plus[0] == 1.0);
  CHECK(half.graph.vertex_count() == 3);
}
