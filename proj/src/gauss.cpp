#include "minkres/gauss.hpp"

#include <algorithm>
#include <cmath>

namespace minkres {

namespace {

Eigen::Matrix3d skew(const Eigen::Vector3d& w) {
  Eigen::Matrix3d s;
  s << 0, -w[2], w[1], w[2], 0, -w[0], -w[1], w[0], 0;
  return s;
}

void require_gauss_domain(const NormSpec& n) {
  if (n.dim() != 3) throw InvalidArgument("the Gauss map is implemented for three-dimensional norms");
  if (!n.is_strictly_convex()) throw NotStrictlyConvex("the Gauss map needs a strictly convex norm: " + n.describe());
}

Definiteness definiteness_of(const Eigen::Matrix3d& a, const GaussSample& g) {
  int pos = 0;
  int neg = 0;
  for (const ProjectivePoint& p : g.inputs) {
    const Eigen::Vector3d v = p.unit();
    const double q = v.dot(a * v);
    if (q > 0)
      ++pos;
    else if (q < 0)
      ++neg;
  }
  if (pos > 0 && neg > 0) return Definiteness::indefinite;
  const Eigen::Matrix3d sym = 0.5 * (a + a.transpose());
  const Eigen::Vector3d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(sym).eigenvalues();
  if (ev.minCoeff() > 0) return Definiteness::positive_definite;
  if (ev.maxCoeff() < 0) return Definiteness::negative_definite;
  return Definiteness::indefinite;
}

}  // namespace

ProjectivePoint::ProjectivePoint(const Vec& v) {
  require_finite(v, "ProjectivePoint");
  const double big = v.cwiseAbs().maxCoeff();
  if (big == 0.0) throw InvalidArgument("ProjectivePoint: zero vector");
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-12 * big) {
      rep_ = v / v[i];
      return;
    }
  }
}

double projective_distance(const Vec& a, const Vec& b) {
  const Eigen::Vector3d ua = a.normalized();
  const Eigen::Vector3d ub = b.normalized();
  return ua.cross(ub).norm();
}

const char* to_string(Definiteness d) {
  switch (d) {
    case Definiteness::positive_definite:
      return "positive_definite";
    case Definiteness::negative_definite:
      return "negative_definite";
    case Definiteness::indefinite:
      return "indefinite";
    case Definiteness::not_applicable:
      return "not_applicable";
  }
  return "unknown";
}

const char* to_string(NormClass c) {
  switch (c) {
    case NormClass::euclidean:
      return "euclidean";
    case NormClass::strictly_convex_non_euclidean:
      return "strictly_convex_non_euclidean";
    case NormClass::non_strictly_convex:
      return "non_strictly_convex";
  }
  return "unknown";
}

ProjectivePoint gauss_map(const NormSpec& n, const ProjectivePoint& v) {
  require_gauss_domain(n);
  require_same_dim(v.rep(), 3, "gauss_map");
  return ProjectivePoint(support_contact(n, v.rep()).point);
}

GaussSample sample_gauss_map(const NormSpec& n, int count, std::uint64_t seed) {
  require_gauss_domain(n);
  if (count < 1) throw InvalidArgument("sample_gauss_map: count must be positive");
  GaussSample g;
  Rng rng(seed);
  for (int i = 0; i < count; ++i) {
    const ProjectivePoint v(random_gaussian(rng, 3));
    g.inputs.push_back(v);
    g.outputs.push_back(gauss_map(n, v));
  }
  return g;
}

double line_preservation_test(const NormSpec& n, int trials, std::uint64_t seed) {
  require_gauss_domain(n);
  if (trials < 1) throw InvalidArgument("line_preservation_test: trials must be positive");
  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < trials; ++k) {
    const Vec v1 = random_gaussian(rng, 3);
    const Vec v2 = random_gaussian(rng, 3);
    const Vec v = gauss(rng) * v1 + gauss(rng) * v2;
    Eigen::Matrix3d m;
    m.col(0) = gauss_map(n, ProjectivePoint(v1)).unit();
    m.col(1) = gauss_map(n, ProjectivePoint(v2)).unit();
    m.col(2) = gauss_map(n, ProjectivePoint(v)).unit();
    worst = std::max(worst, std::abs(m.determinant()));
  }
  return worst;
}

GaussFit fit_linear(const GaussSample& g) {
  const std::size_t count = g.inputs.size();
  if (count != g.outputs.size()) throw InvalidArgument("fit_linear: inputs and outputs differ in length");
  if (count < 12) throw InvalidArgument("fit_linear: need at least 12 samples");

  Mat system(static_cast<Eigen::Index>(3 * count), 9);
  for (std::size_t i = 0; i < count; ++i) {
    require_same_dim(g.inputs[i].rep(), 3, "fit_linear");
    require_same_dim(g.outputs[i].rep(), 3, "fit_linear");
    const Eigen::Vector3d v = g.inputs[i].unit();
    const Eigen::Matrix3d w = skew(g.outputs[i].unit());
    // Column-major vec(A): A v = sum_k v_k A.col(k).
    for (int k = 0; k < 3; ++k) system.block(static_cast<Eigen::Index>(3 * i), 3 * k, 3, 3) = v[k] * w;
  }
  Eigen::JacobiSVD<Mat> svd(system, Eigen::ComputeFullV);
  const Vec sv = svd.singularValues();
  if (sv[7] <= 1e-12 * sv[0]) throw InvalidArgument("fit_linear: samples are degenerate");
  const Vec a_vec = svd.matrixV().col(8);

  GaussFit fit;
  fit.a = Eigen::Map<const Eigen::Matrix3d>(a_vec.data());
  fit.a /= fit.a.norm();
  Eigen::Index r = 0;
  Eigen::Index c = 0;
  fit.a.cwiseAbs().maxCoeff(&r, &c);
  if (fit.a(r, c) < 0) fit.a = -fit.a;

  for (std::size_t i = 0; i < count; ++i) {
    const Vec av = fit.a * g.inputs[i].unit();
    const double d = av.norm() == 0.0 ? 1.0 : projective_distance(av, g.outputs[i].rep());
    fit.residual = std::max(fit.residual, d);
  }
  fit.definiteness = fit.residual <= kGaussAccept ? definiteness_of(fit.a, g) : Definiteness::not_applicable;
  return fit;
}

GaussFit fit_gauss_map(const NormSpec& n, int count, std::uint64_t seed, int max_resamples) {
  GaussFit fit = fit_linear(sample_gauss_map(n, count, seed));
  for (int k = 1; k <= max_resamples && fit.residual > kGaussAccept && fit.residual < kGaussReject; ++k) {
    count *= 2;
    fit = fit_linear(sample_gauss_map(n, count, derive_seed(seed, static_cast<std::uint64_t>(k))));
  }
  return fit;
}

Classification classify_norm(const NormSpec& n, const ClassifyBudget& budget, std::uint64_t seed) {
  Classification out;
  ClassifyEvidence& ev = out.evidence;
  const int d = n.dim();

  const StrictConvexityReport sc = strict_convexity_probe(n, budget.directions, derive_seed(seed, 1));
  ev.strictly_convex = sc.strictly_convex;
  ev.flat_witness = sc.witness;
  ev.sampled_flat_chords = sc.sampled_flat_chords;
  ev.sampled_chords = sc.sampled_chords;
  if (sc.strictly_convex && sc.sampled_flat_chords > 0) {
    ev.conflicts.push_back("strictly convex kind but " + std::to_string(sc.sampled_flat_chords) + " sampled chords stay on the sphere");
  }

  Rng rng(derive_seed(seed, 2));
  for (int k = 0; k < budget.pairs; ++k) {
    const Vec x = sphere_point(n, random_gaussian(rng, d));
    const Vec y = sphere_point(n, random_gaussian(rng, d));
    ev.max_parallelogram_defect = std::max(ev.max_parallelogram_defect, std::abs(parallelogram_defect(n, x, y)));
  }
  ev.parallelogram_zero = ev.max_parallelogram_defect <= 1e-9;

  bool third_stage_euclidean = false;
  if (d >= 3 && ev.strictly_convex) {
    const NormSpec restricted = d == 3 ? n : n.leading(3);
    ev.gauss = fit_gauss_map(restricted, budget.gauss_samples, derive_seed(seed, 3));
    ev.line_defect = line_preservation_test(restricted, budget.gauss_samples, derive_seed(seed, 4));
    third_stage_euclidean = ev.gauss->residual <= kGaussAccept && (ev.gauss->definiteness == Definiteness::positive_definite ||
                                                                    ev.gauss->definiteness == Definiteness::negative_definite);
    if (ev.gauss->residual > kGaussAccept && ev.gauss->residual < kGaussReject) {
      ev.conflicts.push_back("Gauss fit residual stays between the accept and reject thresholds");
    }
  } else if (d == 2) {
    Rng zr(derive_seed(seed, 5));
    third_stage_euclidean = true;
    for (int k = 0; k < budget.reflection_probes; ++k) {
      ev.reflections.push_back(reflection_isometry_check(n, random_unit(zr, 2), 500, derive_seed(seed, 6 + static_cast<std::uint64_t>(k))));
      const ReflectionReport& r = ev.reflections.back();
      third_stage_euclidean = third_stage_euclidean && r.bisector_is_line && r.isometry_residual <= 1e-9;
    }
  }

  if (!ev.strictly_convex) {
    out.cls = NormClass::non_strictly_convex;
    if (ev.parallelogram_zero) ev.conflicts.push_back("flat segment found but the parallelogram defect vanishes");
    if (third_stage_euclidean) ev.conflicts.push_back("flat segment found but every bisector probe is a line");
    return out;
  }
  out.cls = ev.parallelogram_zero ? NormClass::euclidean : NormClass::strictly_convex_non_euclidean;
  if (third_stage_euclidean != ev.parallelogram_zero) {
    ev.conflicts.push_back(std::string("parallelogram stage says ") + (ev.parallelogram_zero ? "euclidean" : "non-euclidean") +
                           " but the " + (d == 2 ? "reflection" : "Gauss fit") + " stage disagrees");
  }
  return out;
}

}  // namespace minkres
