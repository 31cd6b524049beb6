#include <cmath>

#include "helpers.hpp"

using namespace minkres;
using testing::check_close;

namespace {

NormSpec ellipsoid(const Eigen::Matrix3d& q) { return NormSpec::ellipsoidal(Mat(q)); }

double proportional_error(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b) {
  const Eigen::Matrix3d na = a / a.norm();
  Eigen::Matrix3d nb = b / b.norm();
  if ((na - nb).norm() > (na + nb).norm()) nb = -nb;
  return (na - nb).cwiseAbs().maxCoeff();
}

GaussSample synthetic(const Eigen::Matrix3d& a, int count, std::uint64_t seed) {
  Rng rng(seed);
  GaussSample g;
  for (int k = 0; k < count; ++k) {
    const Vec v = random_gaussian(rng, 3);
    g.inputs.emplace_back(v);
    g.outputs.emplace_back(Vec(a * Eigen::Vector3d(v)));
  }
  return g;
}

}  // namespace

TEST_CASE("ProjectivePoint normalization") {
  check_close(ProjectivePoint(make_vec({-2, 0, 1})).rep(), make_vec({1, 0, -0.5}), 0.0);
  check_close(ProjectivePoint(make_vec({0, -3, 3})).rep(), make_vec({0, 1, -1}), 0.0);
  check_close(ProjectivePoint(make_vec({1e-20, 2, 0})).rep(), make_vec({5e-21, 1, 0}), 1e-30);
  CHECK_THROWS_AS(ProjectivePoint(make_vec({0, 0, 0})), InvalidArgument);
  CHECK(projective_distance(make_vec({1, 2, 3}), make_vec({-2, -4, -6})) < 1e-15);
  CHECK(projective_distance(make_vec({1, 0, 0}), make_vec({0, 5, 0})) == doctest::Approx(1.0));
}

TEST_CASE("gauss_map closed forms") {
  SUBCASE("euclidean is the identity") {
    const ProjectivePoint g = gauss_map(NormSpec::euclidean(3), ProjectivePoint(make_vec({1, 2, -3})));
    CHECK(projective_distance(g.rep(), make_vec({1, 2, -3})) < 1e-12);
  }
  SUBCASE("ellipsoid applies the inverse form") {
    const ProjectivePoint g = gauss_map(ellipsoid(Eigen::Vector3d(1, 2, 3).asDiagonal()), ProjectivePoint(make_vec({1, 1, 1})));
    check_close(g.rep(), make_vec({1, 0.5, 1.0 / 3.0}), 1e-12);
  }
  SUBCASE("l4 takes cube roots") {
    const ProjectivePoint g = gauss_map(NormSpec::p_norm(3, 4), ProjectivePoint(make_vec({1, 8, -27})));
    check_close(g.rep(), make_vec({1, 2, -3}), 1e-10);
  }
  CHECK_THROWS_AS(gauss_map(NormSpec::p_norm(3, kInf), ProjectivePoint(make_vec({1, 0, 0}))), NotStrictlyConvex);
  CHECK_THROWS_AS(gauss_map(NormSpec::euclidean(2), ProjectivePoint(make_vec({1, 0}))), InvalidArgument);
}

TEST_CASE("line_preservation_test") {
  CHECK(line_preservation_test(ellipsoid(Eigen::Vector3d(1, 2, 3).asDiagonal()), 64, 1) < 1e-10);
  CHECK(line_preservation_test(NormSpec::p_norm(3, 4), 64, 1) > 1e-2);
}

TEST_CASE("fit_linear recovers a synthetic matrix") {
  Eigen::Matrix3d a;
  a << 2, -1, 0.5, 0.3, 1, -2, 1, 1, 3;
  const GaussFit fit = fit_linear(synthetic(a, 40, 3));
  CHECK(fit.residual < 1e-10);
  CHECK(proportional_error(fit.a, a) < 1e-10);
  CHECK(fit.a.norm() == doctest::Approx(1.0));

  Eigen::Matrix3d indefinite = Eigen::Vector3d(1, -2, 3).asDiagonal();
  CHECK(fit_linear(synthetic(indefinite, 40, 4)).definiteness == Definiteness::indefinite);
  CHECK(fit_linear(synthetic(-Eigen::Matrix3d::Identity(), 40, 5)).definiteness != Definiteness::indefinite);
}

TEST_CASE("fit_gauss_map on quadratic and non-quadratic norms") {
  const GaussFit e = fit_gauss_map(ellipsoid(Eigen::Vector3d(1, 2, 3).asDiagonal()), 64, 1);
  CHECK(e.residual < 1e-8);
  CHECK(e.definiteness == Definiteness::positive_definite);
  CHECK(proportional_error(e.a, Eigen::Vector3d(1, 0.5, 1.0 / 3.0).asDiagonal()) < 1e-6);

  const GaussFit l4 = fit_gauss_map(NormSpec::p_norm(3, 4), 64, 1);
  CHECK(l4.residual > 1e-3);
}

TEST_CASE("linear change of coordinates conjugates the fitted matrix") {
  const Eigen::Matrix3d q = Eigen::Vector3d(1, 2, 3).asDiagonal();
  Eigen::Matrix3d c;
  c << 1, 0.2, 0, -0.4, 1.5, 0.3, 0.1, 0, 0.8;
  const GaussFit base = fit_gauss_map(ellipsoid(q), 64, 2);
  const GaussFit moved = fit_gauss_map(ellipsoid(c.transpose() * q * c), 64, 2);
  const Eigen::Matrix3d ci = c.inverse();
  CHECK(proportional_error(moved.a, ci * base.a * ci.transpose()) < 1e-8);
}

TEST_CASE("classify_norm") {
  struct Case {
    const char* fixture;
    NormClass expected;
  };
  for (const Case& c : {Case{"euclid2.json", NormClass::euclidean}, Case{"euclid3.json", NormClass::euclidean},
                        Case{"ellipsoid2.json", NormClass::euclidean}, Case{"ellipsoid3.json", NormClass::euclidean},
                        Case{"l4_dim2.json", NormClass::strictly_convex_non_euclidean},
                        Case{"l4_dim3.json", NormClass::strictly_convex_non_euclidean},
                        Case{"l1p5_dim4.json", NormClass::strictly_convex_non_euclidean},
                        Case{"l1_dim3.json", NormClass::non_strictly_convex}, Case{"linf2.json", NormClass::non_strictly_convex},
                        Case{"hexagon.json", NormClass::non_strictly_convex}}) {
    CAPTURE(c.fixture);
    const Classification r = classify_norm(testing::norm_fixture(c.fixture), {}, 7);
    CHECK(r.cls == c.expected);
    CHECK_FALSE(r.conflict());
  }
}
