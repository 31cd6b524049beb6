#include <cmath>

#include "helpers.hpp"

using namespace minkres;
using testing::check_close;

namespace {

const Vec kOrigin2 = Vec::Zero(2);

bool parallel(const Vec& a, const Vec& b, double tol) {
  return std::abs(a[0] * b[1] - a[1] * b[0]) <= tol * a.norm() * b.norm();
}

}  // namespace

TEST_CASE("membership") {
  const Bisector eb(NormSpec::euclidean(2), kOrigin2, make_vec({1, 0}));
  CHECK(membership(eb, make_vec({0.5, 7})).member);
  CHECK_FALSE(membership(eb, make_vec({0.6, 7})).member);

  const NormSpec linf = NormSpec::p_norm(2, kInf);
  const Bisector sb(linf, kOrigin2, make_vec({1, 0}));
  const Membership m = membership(sb, make_vec({3, 5}));
  CHECK(m.member);
  CHECK(m.residual == 0.0);
  CHECK(linf.value(make_vec({3, 5})) == 5.0);
  CHECK(linf.value(make_vec({2, 5})) == 5.0);

  const Bisector any(NormSpec::p_norm(2, 3), make_vec({0.3, -1}), make_vec({2, 4}));
  CHECK(membership(any, Vec(0.5 * (any.x + any.y))).residual <= 1e-15);
  CHECK_THROWS_AS(Bisector(linf, make_vec({1, 1}), make_vec({1, 1})), InvalidArgument);
  CHECK_THROWS_AS(membership(sb, make_vec({1, 1}), 0.0), InvalidArgument);
}

TEST_CASE("line_intersect") {
  SUBCASE("perpendicular bisector") {
    const auto pts = line_intersect(Bisector(NormSpec::euclidean(2), kOrigin2, make_vec({1, 0})), make_vec({0, 3}));
    REQUIRE(pts.size() == 1);
    check_close(pts[0], make_vec({0.5, 3}), 1e-12);
  }
  SUBCASE("square norm, diagonal direction, unique root") {
    const auto pts = line_intersect(Bisector(NormSpec::p_norm(2, kInf), kOrigin2, make_vec({1, 1})), make_vec({2, 0}));
    REQUIRE(pts.size() == 1);
    check_close(pts[0], make_vec({1.5, -0.5}), 1e-12);
  }
  SUBCASE("square norm, facet direction, interval of roots") {
    const auto pts = line_intersect(Bisector(NormSpec::p_norm(2, kInf), kOrigin2, make_vec({1, 0})), make_vec({0, 2}));
    REQUIRE(pts.size() == 2);
    check_close(pts[0], make_vec({-1, 2}), 1e-12);
    check_close(pts[1], make_vec({2, 2}), 1e-12);
  }
  SUBCASE("returned points are members") {
    const Bisector b(NormSpec::p_norm(3, 1.5), make_vec({0.2, -1, 3}), make_vec({1, 2, -0.5}));
    Rng rng(7);
    for (int k = 0; k < 50; ++k) {
      for (const Vec& z : line_intersect(b, Vec(10.0 * random_gaussian(rng, 3)))) CHECK(membership(b, z).member);
    }
  }
  CHECK_THROWS_AS(line_intersect(Bisector(NormSpec::euclidean(2), kOrigin2, make_vec({1, 0})), make_vec({INFINITY, 0})),
                  InvalidArgument);
}

TEST_CASE("region_bounds") {
  SUBCASE("euclidean") {
    const auto rb = region_bounds(Bisector(NormSpec::euclidean(2), kOrigin2, make_vec({1, 0})));
    REQUIRE(rb);
    CHECK(parallel(rb->p, make_vec({0, 1}), 1e-12));
    check_close(rb->line_through_x.point, kOrigin2, 0.0);
    check_close(rb->line_through_y.point, make_vec({1, 0}), 0.0);
  }
  SUBCASE("l4 diagonal") {
    const auto rb = region_bounds(Bisector(NormSpec::p_norm(2, 4), kOrigin2, make_vec({1, 1})));
    REQUIRE(rb);
    CHECK(parallel(rb->p, make_vec({0.8408964152537145, -0.8408964152537145}), 1e-12));
    CHECK(std::abs(rb->p.cwiseAbs()[0] - 0.8408964152537145) < 1e-12);
  }
  SUBCASE("square norm facet") { CHECK_FALSE(region_bounds(Bisector(NormSpec::p_norm(2, kInf), kOrigin2, make_vec({1, 0})))); }
  SUBCASE("bisector stays inside the open strip") {
    const Bisector b(NormSpec::p_norm(2, 3), make_vec({0.5, 0.25}), make_vec({-1, 2}));
    const auto rb = region_bounds(b);
    REQUIRE(rb);
    const Vec nhat = make_vec({-rb->p[1], rb->p[0]});
    const double span = nhat.dot(b.y - b.x);
    Rng rng(3);
    for (int k = 0; k < 200; ++k) {
      for (const Vec& z : line_intersect(b, Vec(20.0 * random_gaussian(rng, 2)))) {
        const double s = nhat.dot(z - b.x) / span;
        CHECK(s > 0.0);
        CHECK(s < 1.0);
      }
    }
  }
}

TEST_CASE("flat_ray_cone") {
  const NormSpec linf = NormSpec::p_norm(2, kInf);
  const Bisector b(linf, kOrigin2, make_vec({1, 0}));
  const FlatSegment seg{make_vec({-1, 1}), make_vec({1, 1}), 2.0};
  const FlatRayCone cone = flat_ray_cone(b, seg);
  check_close(cone.apex, make_vec({0.5, 0.5}), 1e-15);
  const Vec p = cone.at(1, 0);
  check_close(p, make_vec({-0.5, 1.5}), 1e-15);
  CHECK(linf.value(p) == 1.5);
  CHECK(linf.value(Vec(p - b.y)) == 1.5);
  const Vec q = cone.at(0, 3);
  check_close(q, make_vec({3.5, 3.5}), 1e-15);
  CHECK(linf.value(q) == 3.5);
  CHECK(linf.value(Vec(q - b.y)) == 3.5);

  const FlatSegment wrong{make_vec({1, 1}), make_vec({-1, 1}), 2.0};
  CHECK_THROWS_AS(flat_ray_cone(b, wrong), InvalidArgument);
}

TEST_CASE("slab_fit verdicts") {
  SUBCASE("euclidean bisectors are hyperplanes") {
    const SlabFit fit = slab_fit(Bisector(NormSpec::euclidean(3), Vec::Zero(3), make_vec({0.3, 1, -2})));
    CHECK(fit.verdict == SlabVerdict::sandwiched);
    for (double w : fit.widths_by_radius) CHECK(w < 1e-8);
    CHECK(fit.samples.size() == 4 * 64);
  }
  SUBCASE("square norm facet direction contains a cone") {
    const SlabFit fit = slab_fit(Bisector(NormSpec::p_norm(2, kInf), kOrigin2, make_vec({1, 0})));
    CHECK(fit.verdict == SlabVerdict::not_sandwiched);
    CHECK(fit.growth > 4.0);
  }
  SUBCASE("l4 off-axis direction") {
    const NormSpec l4 = NormSpec::p_norm(3, 4);
    const SlabFit fit = slab_fit(Bisector(l4, Vec::Zero(3), make_vec({1, 1, 1})));
    CHECK(fit.verdict == SlabVerdict::not_sandwiched);
  }
  SUBCASE("l4 axis direction is the plane w3 = 1/2") {
    const NormSpec l4 = NormSpec::p_norm(3, 4);
    const Bisector b(l4, Vec::Zero(3), make_vec({0, 0, 1}));
    Rng rng(5);
    for (int k = 0; k < 100; ++k) {
      Vec w = 50.0 * random_gaussian(rng, 3);
      w[2] = 0.5;
      CHECK(membership(b, w).residual == 0.0);
    }
    CHECK(slab_fit(b).verdict == SlabVerdict::sandwiched);
  }
  SUBCASE("samples respect the reported slab") {
    const SlabFit fit = slab_fit(Bisector(NormSpec::p_norm(2, 3), kOrigin2, make_vec({1, 2})));
    for (const BisectorSample& s : fit.samples) {
      const double v = fit.normal.dot(s.point);
      CHECK(v >= fit.lo - fit.max_violation - 1e-12);
      CHECK(v <= fit.hi + fit.max_violation + 1e-12);
    }
  }
  SlabOptions bad;
  bad.samples_per_radius = 2;
  CHECK_THROWS_AS(slab_fit(Bisector(NormSpec::euclidean(3), Vec::Zero(3), make_vec({1, 0, 0})), bad), InvalidArgument);
  SlabOptions unordered;
  unordered.radii = {4, 1};
  CHECK_THROWS_AS(slab_fit(Bisector(NormSpec::euclidean(2), kOrigin2, make_vec({1, 0})), unordered), InvalidArgument);
}

TEST_CASE("thinnest_slab on a planar cloud") {
  Rng rng(9);
  const Vec normal = make_vec({1, 2, 2}) / 3.0;
  std::vector<Vec> pts;
  for (int k = 0; k < 40; ++k) {
    Vec p = random_gaussian(rng, 3);
    p -= (p.dot(normal) - 0.7) * normal;
    pts.push_back(p);
  }
  const SlabWidth s = thinnest_slab(pts, 500, 1);
  CHECK(s.width() < 1e-12);
  CHECK(std::abs(std::abs(s.normal.dot(normal)) - 1.0) < 1e-12);
}

TEST_CASE("reflection_isometry_check") {
  const ReflectionReport e = reflection_isometry_check(NormSpec::euclidean(2), make_vec({0.5, 0}), 500, 1);
  CHECK(e.bisector_is_line);
  CHECK(e.isometry_residual < 1e-10);
  CHECK(parallel(e.line_direction, make_vec({0, 1}), 1e-12));

  Mat q(2, 2);
  q << 1, 0, 0, 4;
  const ReflectionReport el = reflection_isometry_check(NormSpec::ellipsoidal(q), make_vec({1, 0}), 500, 1);
  CHECK(el.bisector_is_line);
  CHECK(el.isometry_residual < 1e-9);
  CHECK(parallel(el.line_direction, make_vec({0, 1}), 1e-9));

  CHECK_FALSE(reflection_isometry_check(NormSpec::p_norm(2, kInf), make_vec({1, 0}), 500, 1).bisector_is_line);
  CHECK_THROWS_AS(reflection_isometry_check(NormSpec::euclidean(2), make_vec({0, 0}), 10, 1), InvalidArgument);
}
