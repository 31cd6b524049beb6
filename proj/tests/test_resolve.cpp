#include <cmath>

#include "helpers.hpp"

using namespace minkres;
using testing::check_close;

namespace {

AnchorSet triangle() { return AnchorSet({make_vec({0, 0}), make_vec({1, 0}), make_vec({0, 1})}); }
AnchorSet ambiguous() { return AnchorSet({make_vec({0, -1}), make_vec({-4, 6}), make_vec({4, 6})}); }

AnchorSet random_simplex(Rng& rng, int d) {
  for (;;) {
    std::vector<Vec> pts;
    for (int j = 0; j <= d; ++j) pts.push_back(random_gaussian(rng, d));
    if (affine_independence(pts) > 0.3) return AnchorSet(pts);
  }
}

}  // namespace

TEST_CASE("AnchorSet validation") {
  CHECK_THROWS_AS(AnchorSet({make_vec({0, 0}), make_vec({1, 1}), make_vec({2, 2})}), DegenerateAnchors);
  CHECK_THROWS_AS(AnchorSet({make_vec({0, 0}), make_vec({1, 0})}), DegenerateAnchors);
  CHECK_THROWS_AS(AnchorSet({make_vec({0, 0}), make_vec({1, 0}), make_vec({0, 1, 2})}), DimensionMismatch);
  CHECK(triangle().dim() == 2);
  CHECK(triangle().size() == 3);
}

TEST_CASE("distances_from") {
  const DistanceVector r = distances_from(triangle(), NormSpec::euclidean(2), make_vec({0.25, 0.25}));
  check_close(r.values, make_vec({0.3535533905932738, 0.7905694150420949, 0.7905694150420949}), 1e-15);

  const DistanceVector s = distances_from(ambiguous(), NormSpec::p_norm(2, kInf), make_vec({-1, 1}));
  check_close(s.values, make_vec({2, 5, 5}), 0.0);

  const AnchorSet a = ambiguous();
  CHECK(distances_from(a, NormSpec::p_norm(2, 3), a[0]).values[0] == 0.0);
  CHECK_THROWS_AS(distances_from(a, NormSpec::euclidean(3), make_vec({0, 0, 0})), DimensionMismatch);
}

TEST_CASE("hull_membership and barycentric coordinates") {
  const auto inside = hull_membership(triangle(), make_vec({0.25, 0.25}));
  REQUIRE(inside);
  check_close(*inside, make_vec({0.5, 0.25, 0.25}), 1e-15);

  const auto lambda = hull_membership(AnchorSet({make_vec({0, -1}), make_vec({4, 6}), make_vec({-4, 6})}), make_vec({-1, 1}));
  REQUIRE(lambda);
  CHECK(lambda->minCoeff() > 0.0);

  CHECK_FALSE(hull_membership(triangle(), make_vec({1, 1})));

  // Affine hull of a triangle in R^3.
  const std::vector<Vec> tri3{make_vec({0, 0, 0}), make_vec({1, 0, 0}), make_vec({0, 1, 0})};
  CHECK(barycentric(tri3, make_vec({0.2, 0.3, 0})));
  CHECK_FALSE(barycentric(tri3, make_vec({0.2, 0.3, 0.1})));
}

TEST_CASE("distance_to_hull") {
  const std::vector<Vec> tri = triangle().points();
  CHECK(distance_to_hull(tri, make_vec({0.2, 0.2})) < 1e-12);
  CHECK(distance_to_hull(tri, make_vec({1, 1})) == doctest::Approx(0.7071067811865476).epsilon(1e-9));
  CHECK(distance_to_hull(tri, make_vec({-1, -1})) == doctest::Approx(1.4142135623730951).epsilon(1e-9));
}

TEST_CASE("multilaterate") {
  SUBCASE("euclidean round trip is unique and agrees with the linear system") {
    const NormSpec e = NormSpec::euclidean(2);
    const Multilateration m = multilaterate(triangle(), e, distances_from(triangle(), e, make_vec({0.25, 0.25})));
    REQUIRE(m.components.size() == 1);
    CHECK(m.components[0].shape == ComponentShape::point);
    check_close(m.components[0].vertices[0], make_vec({0.25, 0.25}), 1e-9);
    REQUIRE(m.linear_solution);
    check_close(*m.linear_solution, make_vec({0.25, 0.25}), 1e-12);
    CHECK(m.crosscheck_agrees);
  }
  SUBCASE("ambiguous square-norm fixture") {
    const Multilateration m = multilaterate(ambiguous(), NormSpec::p_norm(2, kInf), {make_vec({2, 5, 5})});
    const std::vector<Vec> pts = m.points();
    REQUIRE(pts.size() == 2);
    check_close(pts[0], make_vec({-1, 1}), 1e-6);
    check_close(pts[1], make_vec({1, 1}), 1e-6);
    REQUIRE(m.components.size() == 1);
    CHECK(m.components[0].shape == ComponentShape::segment);
    CHECK(distance_to_component(m.components[0], make_vec({0.3, 1})) < 1e-9);
  }
  SUBCASE("zero distance pins a vertex") {
    const AnchorSet a = ambiguous();
    for (const NormSpec& n : {NormSpec::euclidean(2), NormSpec::p_norm(2, 3), NormSpec::p_norm(2, kInf)}) {
      const Multilateration m = multilaterate(a, n, distances_from(a, n, a[0]));
      REQUIRE(m.components.size() == 1);
      check_close(m.components[0].vertices[0], a[0], 1e-6);
    }
  }
  SUBCASE("ellipsoidal round trip in 3D") {
    Mat q = Mat::Zero(3, 3);
    q.diagonal() << 1, 2, 3;
    const NormSpec n = NormSpec::ellipsoidal(q);
    const AnchorSet a({make_vec({0, 0, 0}), make_vec({1, 0, 0}), make_vec({0, 1, 0}), make_vec({0, 0, 1})});
    const Vec x = make_vec({0.1, 0.2, 0.3});
    const Multilateration m = multilaterate(a, n, distances_from(a, n, x));
    REQUIRE(m.components.size() == 1);
    check_close(m.components[0].vertices[0], x, 1e-7);
    CHECK(m.crosscheck_agrees);
  }
  SUBCASE("infeasible inputs") {
    const NormSpec e = NormSpec::euclidean(2);
    CHECK_THROWS_AS(multilaterate(triangle(), e, {make_vec({0, 0, 1})}), InfeasibleDistances);
    CHECK_THROWS_AS(multilaterate(triangle(), e, {make_vec({5, 5, 5})}), InfeasibleDistances);
    CHECK_THROWS_AS(multilaterate(triangle(), e, {make_vec({1, 1})}), DimensionMismatch);
    CHECK_THROWS_AS(multilaterate(triangle(), e, {make_vec({-1, 1, 1})}), InvalidArgument);
    const Multilateration none = multilaterate(triangle(), e, {make_vec({0.9, 0.9, 0.05})});
    CHECK(none.components.empty());
    CHECK(none.best_residual > 1e-3);
  }
}

TEST_CASE("is_resolving_for_hull") {
  SUBCASE("square norm fixture is not resolving") {
    const ResolutionReport r = is_resolving_for_hull(ambiguous(), NormSpec::p_norm(2, kInf));
    CHECK_FALSE(r.resolving);
    REQUIRE(r.witness);
    check_close(r.witness->first, make_vec({-1, 1}), 1e-9);
    check_close(r.witness->second, make_vec({1, 1}), 1e-9);
    CHECK(r.residual < 1e-8);
  }
  SUBCASE("search without synthesizers still finds an ambiguity") {
    ResolveBudget budget;
    budget.use_synthesizers = false;
    const ResolutionReport r = is_resolving_for_hull(ambiguous(), NormSpec::p_norm(2, kInf), budget, 3);
    CHECK_FALSE(r.resolving);
    REQUIRE(r.witness);
    CHECK((r.witness->first - r.witness->second).norm() > 1e-6);
    CHECK(hull_membership(ambiguous(), r.witness->first));
    CHECK(hull_membership(ambiguous(), r.witness->second));
    CHECK(r.residual < 1e-8);
  }
  SUBCASE("euclidean tetrahedra resolve their hull") {
    Rng rng(11);
    ResolveBudget budget;
    budget.probes = 8;
    budget.starts = 4;
    for (int k = 0; k < 3; ++k) CHECK(is_resolving_for_hull(random_simplex(rng, 3), NormSpec::euclidean(3), budget, k).resolving);
  }
  SUBCASE("l4 triangles resolve their hull") {
    Rng rng(12);
    for (int k = 0; k < 3; ++k) CHECK(is_resolving_for_hull(random_simplex(rng, 2), NormSpec::p_norm(2, 4), {}, k).resolving);
  }
  CHECK_THROWS_AS(is_resolving_for_hull(triangle(), NormSpec::euclidean(3)), DimensionMismatch);
}
