#include <algorithm>
#include <cmath>
#include <numbers>

#include "minkres/resolve.hpp"

namespace minkres {

namespace {

double min_coeff_or(const std::optional<Vec>& v, double fallback) { return v ? v->minCoeff() : fallback; }

double margin_of(const std::vector<Vec>& anchors, const Vec& x, const Vec& y) {
  constexpr double kOutside = -std::numeric_limits<double>::infinity();
  return std::min(min_coeff_or(barycentric(anchors, x), kOutside), min_coeff_or(barycentric(anchors, y), kOutside));
}

double equidistance(const NormSpec& n, const std::vector<Vec>& anchors, const Vec& x, const Vec& y) {
  double worst = 0.0;
  for (const Vec& p : anchors) worst = std::max(worst, std::abs(n.value(Vec(p - x)) - n.value(Vec(p - y))));
  return worst;
}

Vec pad(const Vec& v, int dim) {
  Vec out = Vec::Zero(dim);
  out.head(v.size()) = v;
  return out;
}

Vec cross3(const Vec& a, const Vec& b) {
  Vec out(3);
  out << a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0];
  return out;
}

std::optional<FlatSegment> planar_flat_segment(const NormSpec& n) {
  const StrictConvexityReport probe = strict_convexity_probe(n, 64, 0);
  if (probe.strictly_convex) return std::nullopt;
  if (probe.witness) return probe.witness;
  const Plane2 plane{Vec::Unit(n.dim(), 0), Vec::Unit(n.dim(), 1)};
  for (int k = 0; k < 720; ++k) {
    const double th = std::numbers::pi * k / 720.0;
    Vec dir = Vec::Zero(n.dim());
    dir[0] = std::cos(th);
    dir[1] = std::sin(th);
    if (auto seg = flat_segment_parallel_to(n, dir, plane)) return seg;
  }
  return std::nullopt;
}

}  // namespace

CertificateCheck verify_certificate(const CounterexampleCertificate& cert, const NormSpec& n) {
  CertificateCheck out;
  const int d = n.dim();
  auto fail = [&](std::string why) { out.failures.push_back(std::move(why)); };

  bool shapes_ok = cert.x.size() == d && cert.y.size() == d;
  for (const Vec& p : cert.anchors) shapes_ok = shapes_ok && p.size() == d;
  if (!shapes_ok) {
    fail("dimension mismatch between certificate and norm");
    return out;
  }
  if (static_cast<int>(cert.anchors.size()) != d + 1) {
    fail("expected " + std::to_string(d + 1) + " anchors, got " + std::to_string(cert.anchors.size()));
  }

  std::vector<Vec> all = cert.anchors;
  all.push_back(cert.x);
  all.push_back(cert.y);
  const double scale = std::max(1.0, diameter(all));

  out.smallest_singular_value = affine_independence(cert.anchors);
  out.affine_independent = out.smallest_singular_value > 1e-10 * scale;
  if (!out.affine_independent) fail("anchors are not affinely independent");

  for (const Vec& p : cert.anchors) {
    const double r = std::abs(n.value(Vec(p - cert.x)) - n.value(Vec(p - cert.y)));
    out.residuals.push_back(r);
    out.equidistance_residual = std::max(out.equidistance_residual, r);
  }
  if (out.equidistance_residual > 1e-8) fail("anchors are not equidistant from x and y");

  out.bary_x = barycentric(cert.anchors, cert.x);
  out.bary_y = barycentric(cert.anchors, cert.y);
  out.hull_margin = margin_of(cert.anchors, cert.x, cert.y);
  if (out.hull_margin < -1e-10) fail("x or y lies outside the anchor hull");

  out.separation = (cert.x - cert.y).norm();
  if (out.separation <= 1e-6) fail("x and y coincide");

  out.passed = out.failures.empty();
  return out;
}

void refresh_certificate(CounterexampleCertificate& cert) {
  cert.equidistance_residual = equidistance(cert.norm, cert.anchors, cert.x, cert.y);
  cert.hull_margin = margin_of(cert.anchors, cert.x, cert.y);
}

CounterexampleCertificate flat_segment_counterexample(const NormSpec& n, const FlatSegment& seg, std::optional<double> s) {
  require_same_dim(seg.a, n.dim(), "flat_segment_counterexample");
  require_same_dim(seg.b, n.dim(), "flat_segment_counterexample");
  if (s && !(*s > 0.0)) throw InvalidArgument("flat_segment_counterexample: s must be positive");
  const Vec& a = seg.a;
  const Vec& b = seg.b;
  auto build = [&](double sv) {
    CounterexampleCertificate cert{n, a, b, {Vec(-0.5 * (a + b)), Vec((1.0 + sv) * a + b), Vec(a + (1.0 + sv) * b)}, 0.0, 0.0};
    refresh_certificate(cert);
    return cert;
  };
  if (s) return build(*s);
  for (double sv = 1.0; sv < 1e12; sv *= 2.0) {
    CounterexampleCertificate cert = build(sv);
    if (cert.hull_margin > 1e-6) return cert;
  }
  throw InvalidArgument("flat_segment_counterexample: no s places both endpoints inside the hull");
}

CounterexampleCertificate srs2_counterexample(const NormSpec& n, std::optional<double> s) {
  if (n.dim() != 2) throw InvalidArgument("srs2_counterexample: planar norms only");
  const auto seg = planar_flat_segment(n);
  if (!seg) throw NormIsStrictlyConvex("no flat segment on the unit circle: " + n.describe());
  return flat_segment_counterexample(n, *seg, s);
}

Vec RegionGraph::m(double angle) const { return std::cos(angle) * e1 + std::sin(angle) * e2; }

RegionGraph region_graph(const NormSpec& n, const Vec& z, int num_angles) {
  if (n.dim() != 3) throw InvalidArgument("region_graph: three-dimensional norms only");
  require_same_dim(z, 3, "region_graph");
  require_finite(z, "region_graph");
  if (z.norm() == 0.0) throw InvalidArgument("region_graph: zero axis");
  if (num_angles < 16 || num_angles % 2 != 0) throw InvalidArgument("region_graph: num_angles must be even and >= 16");
  if (!n.is_strictly_convex()) throw NotStrictlyConvex("region_graph: " + n.describe());

  RegionGraph g;
  g.axis = z;
  const Vec zh = z.normalized();
  Eigen::Index k = 0;
  zh.cwiseAbs().minCoeff(&k);
  Vec e = Vec::Unit(3, k);
  g.e1 = (e - e.dot(zh) * zh).normalized();
  g.e2 = cross3(zh, g.e1).normalized();
  for (int i = 0; i < num_angles; ++i) {
    const double th = 2.0 * std::numbers::pi * i / num_angles;
    g.samples.push_back({th, line_min_norm(n, g.m(th), z).c});
  }
  return g;
}

LinearityResult graph_linearity_test(const RegionGraph& g, double tol) {
  const int count = static_cast<int>(g.samples.size());
  if (count < 16) throw InvalidArgument("graph_linearity_test: need at least 16 samples");
  Mat design(count, 2);
  Vec f(count);
  for (int i = 0; i < count; ++i) {
    design(i, 0) = std::cos(g.samples[static_cast<std::size_t>(i)].angle);
    design(i, 1) = std::sin(g.samples[static_cast<std::size_t>(i)].angle);
    f[i] = g.samples[static_cast<std::size_t>(i)].value;
  }
  const Vec coef = design.colPivHouseholderQr().solve(f);

  LinearityResult out;
  out.residual = (design * coef - f).cwiseAbs().maxCoeff();
  out.linear = out.residual <= tol;
  if (count % 2 == 0) {
    for (int i = 0; i < count / 2; ++i) out.oddness_defect = std::max(out.oddness_defect, std::abs(f[i] + f[i + count / 2]));
  }
  if (out.linear) return out;

  // Cone points P_a, P_b span the new M; with u1 = -P_a, u2 = -P_b the graph vanishes on the
  // negative axes, and samples between the antipodes carry positive coordinates (x, y).
  Mat md(count, 2);
  for (int i = 0; i < count; ++i) md.row(i) = design.row(i);
  const double floor = std::max(1e3 * tol, 1e-9 * std::max(1.0, f.cwiseAbs().maxCoeff()));
  double best_score = 0.0;
  SignPattern best;
  const int half = count / 2;
  for (int a = 0; a < count; ++a) {
    for (int step = 1; step < half; ++step) {
      const int b = (a + step) % count;
      Eigen::Matrix2d basis;
      basis.col(0) = md.row(a).transpose();
      basis.col(1) = md.row(b).transpose();
      const Eigen::Matrix2d inv = basis.inverse();
      double best_pos = 0.0;
      double best_neg = 0.0;
      int kp = -1;
      int kn = -1;
      for (int j = 1; j < step; ++j) {
        const int k = (a + half + j) % count;
        const Eigen::Vector2d xy = -(inv * md.row(k).transpose());
        const double alpha = f[k] + xy[0] * f[a] + xy[1] * f[b];
        if (alpha > best_pos) {
          best_pos = alpha;
          kp = k;
        }
        if (-alpha > best_neg) {
          best_neg = -alpha;
          kn = k;
        }
      }
      const double score = std::min(best_pos, best_neg);
      if (kp < 0 || kn < 0 || score <= floor || score <= best_score) continue;
      best_score = score;
      const Vec pa = g.cone_point(g.samples[static_cast<std::size_t>(a)]);
      const Vec pb = g.cone_point(g.samples[static_cast<std::size_t>(b)]);
      best.u1 = -pa;
      best.u2 = -pb;
      const Eigen::Vector2d xy1 = -(inv * md.row(kp).transpose());
      const Eigen::Vector2d xy2 = -(inv * md.row(kn).transpose());
      best.xy1 = Vec(xy1);
      best.xy2 = Vec(xy2);
      best.alpha1 = best_pos;
      best.alpha2 = best_neg;
      best.ordered = xy1[0] < xy2[0] && xy2[1] < xy1[1];
    }
  }
  if (best_score == 0.0) throw NoSignPattern("no sign pattern found on a nonlinear region graph");
  out.sign_pattern = best;
  return out;
}

namespace {

std::optional<CounterexampleCertificate> build_srs3(const NormSpec& n, const Vec& z, const SignPattern& sp,
                                                    int max_doublings, Srs3Trace* trace) {
  const Vec q1 = sp.xy1[0] * sp.u1 + sp.xy1[1] * sp.u2 + sp.alpha1 * z;
  const Vec q2 = sp.xy2[0] * sp.u1 + sp.xy2[1] * sp.u2 - sp.alpha2 * z;
  const std::vector<Vec> base{q1, q2, Vec(-sp.u1), Vec(-sp.u2)};
  const Bisector bis(n, Vec::Zero(3), z);

  // Convex weights with sum_j w_j q_j = 0: mix the q1 and q2 representations of the origin.
  const double s1 = 1.0 + sp.xy1[0] + sp.xy1[1];
  const double s2 = 1.0 + sp.xy2[0] + sp.xy2[1];
  const double h1 = sp.alpha1 / s1;
  const double h2 = -sp.alpha2 / s2;
  const double mu = -h2 / (h1 - h2);

  const Vec zero = Vec::Zero(3);
  double t = 1.0;
  for (int k = 0; k <= max_doublings; ++k, t *= 2.0) {
    std::vector<Vec> anchors;
    std::vector<double> thetas;
    bool ok = true;
    for (const Vec& q : base) {
      const Vec qt = t * q;
      const std::vector<Vec> hits = line_intersect(bis, qt, 1e-12, 200);
      const Vec hit = hits.size() == 1 ? hits.front() : Vec(0.5 * (hits.front() + hits.back()));
      const double theta = (hit - qt).dot(z) / z.squaredNorm();
      if (!(theta > 1e-12 && theta < 1.0 - 1e-12)) {
        ok = false;
        break;
      }
      anchors.push_back(hit);
      thetas.push_back(theta);
    }
    if (!ok) continue;
    const auto lx = barycentric(anchors, zero);
    const auto ly = barycentric(anchors, z);
    if (!lx || !ly || lx->minCoeff() <= 1e-6 || ly->minCoeff() <= 1e-6) continue;
    CounterexampleCertificate cert{n, zero, z, anchors, 0.0, 0.0};
    refresh_certificate(cert);
    if (!verify_certificate(cert, n).passed) continue;
    if (trace) {
      const double w3 = mu * sp.xy1[0] / s1 + (1.0 - mu) * sp.xy2[0] / s2;
      const double w4 = mu * sp.xy1[1] / s1 + (1.0 - mu) * sp.xy2[1] / s2;
      *trace = Srs3Trace{z, sp, mu, w3 / (w3 + w4), t, thetas};
    }
    return cert;
  }
  return std::nullopt;
}

}  // namespace

CounterexampleCertificate srs3_counterexample(const NormSpec& n, const Srs3Options& options, std::uint64_t seed,
                                              Srs3Trace* trace) {
  if (n.dim() != 3) throw InvalidArgument("srs3_counterexample: three-dimensional norms only");
  if (!n.is_strictly_convex()) throw NotStrictlyConvex("srs3_counterexample needs a strictly convex norm");

  std::vector<Vec> axes{make_vec({1, 1, 1}), make_vec({1, 1, 0}),  make_vec({1, 0, 1}), make_vec({0, 1, 1}),
                        make_vec({1, -1, 0}), make_vec({1, 2, 3}), make_vec({1, -1, 1}), make_vec({1, 0, 0}),
                        make_vec({0, 1, 0}), make_vec({0, 0, 1})};
  Rng rng(derive_seed(seed, 3));
  for (int k = 0; k < options.random_directions; ++k) axes.push_back(random_unit(rng, 3));

  bool nonlinear = false;
  for (const Vec& axis : axes) {
    const Vec z = axis / n.value(axis);
    const RegionGraph g = region_graph(n, z, options.num_angles);
    LinearityResult lin;
    try {
      lin = graph_linearity_test(g, options.linearity_tol);
    } catch (const NoSignPattern&) {
      nonlinear = true;
      continue;
    }
    if (lin.linear) continue;
    nonlinear = true;
    if (auto cert = build_srs3(n, z, *lin.sign_pattern, options.max_doublings, trace)) return *cert;
  }
  if (nonlinear) throw NoSignPattern("no probed axis produced a usable sign pattern");
  throw NormIsEuclidean("every probed region graph is linear: " + n.describe());
}

CounterexampleCertificate lift_to_dimension(const CounterexampleCertificate& cert, const NormSpec& n, std::uint64_t seed) {
  const int from = static_cast<int>(cert.x.size());
  const int to = n.dim();
  if (from > to) throw InvalidArgument("lift_to_dimension: target dimension is smaller than the certificate's");
  if (cert.y.size() != from) throw DimensionMismatch("lift_to_dimension: x and y differ in dimension");

  if (from < to) {
    if (cert.norm.dim() != from) throw DimensionMismatch("lift_to_dimension: certificate norm dimension");
    Rng check(derive_seed(seed, 11));
    for (int k = 0; k < 64; ++k) {
      const Vec v = random_gaussian(check, from);
      const double lhs = n.value(pad(v, to));
      const double rhs = cert.norm.value(v);
      if (std::abs(lhs - rhs) > 1e-9 * std::max(1.0, rhs)) {
        throw InvalidArgument("lift_to_dimension: the target norm does not restrict to the certificate's norm");
      }
    }
  }

  CounterexampleCertificate out{n, pad(cert.x, to), pad(cert.y, to), {}, 0.0, 0.0};
  for (const Vec& p : cert.anchors) out.anchors.push_back(pad(p, to));

  const Bisector bis(n, out.x, out.y);
  std::vector<Vec> all = out.anchors;
  all.push_back(out.x);
  all.push_back(out.y);
  const double scale = std::max(1.0, diameter(all));
  Rng rng(derive_seed(seed, 17));
  while (static_cast<int>(out.anchors.size()) < to + 1) {
    bool added = false;
    for (int attempt = 0; attempt < 64 && !added; ++attempt) {
      const Vec w = out.x + scale * random_gaussian(rng, to);
      const Vec p = line_intersect(bis, w, 1e-12, 200).front();
      std::vector<Vec> trial = out.anchors;
      trial.push_back(p);
      if (affine_independence(trial) > 1e-6 * scale) {
        out.anchors = std::move(trial);
        added = true;
      }
    }
    if (!added) throw DegenerateAnchors("lift_to_dimension: could not extend the anchors independently");
  }
  refresh_certificate(out);
  return out;
}

}  // namespace minkres
