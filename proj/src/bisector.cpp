#include "minkres/bisector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace minkres {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::vector<Vec> direction_candidates(int dim, int grid, std::uint64_t seed) {
  std::vector<Vec> dirs;
  dirs.reserve(static_cast<std::size_t>(grid) + static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) dirs.push_back(Vec::Unit(dim, i));
  if (dim == 2) {
    for (int k = 0; k < grid; ++k) {
      const double th = std::numbers::pi * k / grid;
      dirs.push_back(make_vec({std::cos(th), std::sin(th)}));
    }
  } else if (dim == 3) {
    // Fibonacci lattice on the sphere.
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < grid; ++k) {
      const double zc = 1.0 - 2.0 * (k + 0.5) / grid;
      const double r = std::sqrt(std::max(0.0, 1.0 - zc * zc));
      const double phi = golden * k;
      dirs.push_back(make_vec({r * std::cos(phi), r * std::sin(phi), zc}));
    }
  } else {
    Rng rng(seed);
    for (int k = 0; k < grid; ++k) dirs.push_back(random_unit(rng, dim));
  }
  return dirs;
}

std::pair<double, double> extent(const std::vector<Vec>& pts, const Vec& n) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const Vec& p : pts) {
    const double s = n.dot(p);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  return {lo, hi};
}

Vec perpendicular_basis_vector(const Vec& n, int i) {
  Vec t = Vec::Unit(n.size(), i);
  t -= t.dot(n) * n;
  return t;
}

// Distance along y - x over which the root of h is indistinguishable from rounding.
double root_uncertainty(const Bisector& b, const Vec& z) {
  const Vec u = (b.y - b.x).normalized();
  const double slope = (b.norm.subgradient(Vec(z - b.x)) - b.norm.subgradient(Vec(z - b.y))).dot(u);
  const double slack = 64.0 * kEps * std::max(1.0, b.norm.value(Vec(z - b.x)));
  return slope > 0.0 ? slack / slope : std::numeric_limits<double>::infinity();
}

}  // namespace

Bisector::Bisector(NormSpec n, Vec x_in, Vec y_in) : norm(std::move(n)), x(std::move(x_in)), y(std::move(y_in)) {
  require_same_dim(x, norm.dim(), "Bisector x");
  require_same_dim(y, norm.dim(), "Bisector y");
  require_finite(x, "Bisector x");
  require_finite(y, "Bisector y");
  if ((x - y).cwiseAbs().maxCoeff() == 0.0) throw InvalidArgument("Bisector: x and y must be distinct");
}

Membership membership(const Bisector& b, const Vec& z, double tol) {
  require_same_dim(z, b.norm.dim(), "membership");
  if (!(tol > 0.0)) throw InvalidArgument("membership: tol must be positive");
  const double dx = b.norm.value(Vec(z - b.x));
  const double dy = b.norm.value(Vec(z - b.y));
  const double residual = std::abs(dx - dy);
  return {residual <= tol * std::max(1.0, dx), residual};
}

std::vector<Vec> line_intersect(const Bisector& b, const Vec& anchor, double tol, int max_iterations) {
  require_same_dim(anchor, b.norm.dim(), "line_intersect");
  require_finite(anchor, "line_intersect anchor");
  if (!(tol > 0.0)) throw InvalidArgument("line_intersect: tol must be positive");
  const Vec u = b.y - b.x;
  const Vec mid = 0.5 * (b.x + b.y);
  const double t_center = (mid - anchor).dot(u) / u.squaredNorm();

  auto point = [&](double t) -> Vec { return anchor + t * u; };
  // t -> h(anchor + t u) is nondecreasing with limits -||u|| and +||u||.
  auto h = [&](double t) { return b.gap(point(t)); };
  auto slack = [&](double t) { return 64.0 * kEps * std::max(1.0, b.norm.value(Vec(point(t) - b.x))); };

  double reach = 1.0;
  double lo = t_center - reach;
  while (h(lo) >= -slack(lo) && reach < 1e18) {
    reach *= 2.0;
    lo = t_center - reach;
  }
  reach = 1.0;
  double hi = t_center + reach;
  while (h(hi) <= slack(hi) && reach < 1e18) {
    reach *= 2.0;
    hi = t_center + reach;
  }

  auto bisect = [&](auto&& reached) {
    double a = lo;
    double c = hi;
    for (int it = 0; it < max_iterations; ++it) {
      const double m = 0.5 * (a + c);
      if (m == a || m == c) break;
      if (reached(m))
        c = m;
      else
        a = m;
    }
    return 0.5 * (a + c);
  };
  const double t_left = bisect([&](double t) { return h(t) >= -slack(t); });
  const double t_right = bisect([&](double t) { return h(t) > slack(t); });

  const Vec left = point(t_left);
  const Vec right = point(t_right);
  const double scale = std::max(1.0, b.norm.value(Vec(left - b.x)));
  if (b.norm.value(Vec(right - left)) <= tol * scale) return {point(0.5 * (t_left + t_right))};
  return {left, right};
}

std::optional<RegionBounds> region_bounds(const Bisector& b, const std::optional<Plane2>& plane) {
  const int d = b.norm.dim();
  const Vec u = b.y - b.x;
  const Plane2 frame = plane ? *plane : Plane2{Vec::Unit(d, 0), Vec::Unit(d, 1)};
  if (!plane && d != 2) throw InvalidArgument("region_bounds: a containing plane is required when dim > 2");
  if (flat_segment_parallel_to(b.norm, u, frame)) return std::nullopt;
  const Vec p = planar_support_parallel_to(b.norm, u, frame);
  return RegionBounds{p, AffineLine{b.x, p}, AffineLine{b.y, p}};
}

FlatRayCone flat_ray_cone(const Bisector& b, const FlatSegment& seg) {
  require_same_dim(seg.a, b.norm.dim(), "flat_ray_cone");
  require_same_dim(seg.b, b.norm.dim(), "flat_ray_cone");
  const Vec u = b.x - b.y;
  const Vec chord = seg.a - seg.b;
  const double lambda = chord.dot(u) / u.squaredNorm();
  if (!(lambda > 0.0) || (chord - lambda * u).norm() > 1e-9 * std::max(1.0, chord.norm())) {
    throw InvalidArgument("flat_ray_cone: segment is not a positive multiple of x - y");
  }
  const double scale = b.norm.value(u) / b.norm.value(chord);
  return FlatRayCone{b.x + scale * seg.b, seg.a, seg.b};
}

const char* to_string(SlabVerdict v) { return v == SlabVerdict::sandwiched ? "sandwiched" : "not_sandwiched"; }

SlabWidth thinnest_slab(const std::vector<Vec>& points, int direction_grid, std::uint64_t seed) {
  if (points.size() < 2) throw InvalidArgument("thinnest_slab: need at least two points");
  const int d = static_cast<int>(points.front().size());
  std::vector<Vec> candidates = direction_candidates(d, direction_grid, seed);

  // Principal direction of least spread; exact for coplanar clouds.
  Vec centroid = Vec::Zero(d);
  for (const Vec& p : points) centroid += p;
  centroid /= static_cast<double>(points.size());
  Mat centered(static_cast<Eigen::Index>(points.size()), d);
  for (std::size_t i = 0; i < points.size(); ++i) centered.row(static_cast<Eigen::Index>(i)) = (points[i] - centroid).transpose();
  Eigen::JacobiSVD<Mat> svd(centered, Eigen::ComputeThinV);
  candidates.push_back(svd.matrixV().col(d - 1));

  auto width = [&](const Vec& n) {
    const auto [lo, hi] = extent(points, n);
    return hi - lo;
  };
  Vec best = candidates.front();
  double best_w = width(best);
  for (const Vec& c : candidates) {
    const double w = width(c);
    if (w < best_w) {
      best_w = w;
      best = c;
    }
  }

  // Pattern search on the sphere of normals.
  for (double step = 0.05; step > 1e-13;) {
    bool improved = false;
    for (int i = 0; i < d; ++i) {
      Vec t = perpendicular_basis_vector(best, i);
      if (t.norm() < 1e-6) continue;
      t.normalize();
      for (double sgn : {1.0, -1.0}) {
        const Vec trial = (best + sgn * step * t).normalized();
        const double w = width(trial);
        if (w < best_w) {
          best_w = w;
          best = trial;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  const auto [lo, hi] = extent(points, best);
  return SlabWidth{best, lo, hi};
}

SlabFit slab_fit(const Bisector& b, const SlabOptions& options) {
  const int d = b.norm.dim();
  if (options.samples_per_radius < d + 1) throw InvalidArgument("slab_fit: too few samples per radius");
  std::vector<double> radii = options.radii.empty() ? std::vector<double>{1.0, 4.0, 16.0, 64.0} : options.radii;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0)) throw InvalidArgument("slab_fit: radii must be positive");
    if (i > 0 && !(radii[i] > radii[i - 1])) throw InvalidArgument("slab_fit: radii must be increasing");
  }
  const double unit = b.norm.value(Vec(b.y - b.x));
  const Vec mid = 0.5 * (b.x + b.y);

  SlabFit fit;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double r = radii[i] * unit;
    fit.radii.push_back(r);
    for (int k = 0; k < options.samples_per_radius; ++k) {
      Rng rng(derive_seed(options.seed, i * static_cast<std::uint64_t>(options.samples_per_radius) + k));
      const Vec anchor = mid + r * random_unit(rng, d);
      for (const Vec& z : line_intersect(b, anchor)) {
        fit.samples.push_back({r, z, std::abs(b.gap(z)), root_uncertainty(b, z)});
      }
    }
  }

  std::vector<Vec> cumulative;
  std::size_t next = 0;
  SlabWidth last;
  double noise = 0.0;
  for (double r : fit.radii) {
    while (next < fit.samples.size() && fit.samples[next].radius <= r) {
      if (std::isfinite(fit.samples[next].uncertainty)) noise = std::max(noise, fit.samples[next].uncertainty);
      cumulative.push_back(fit.samples[next++].point);
    }
    last = thinnest_slab(cumulative, options.direction_grid, options.seed);
    fit.widths_by_radius.push_back(last.width());
    fit.noise_by_radius.push_back(4.0 * noise);
  }

  fit.normal = last.normal;
  fit.sample_radius = fit.radii.back();
  fit.lo = std::numeric_limits<double>::infinity();
  fit.hi = -fit.lo;
  for (const BisectorSample& s : fit.samples) {
    if (s.radius > fit.radii.front()) break;
    const double v = fit.normal.dot(s.point);
    fit.lo = std::min(fit.lo, v);
    fit.hi = std::max(fit.hi, v);
  }
  for (const BisectorSample& s : fit.samples) {
    const double v = fit.normal.dot(s.point);
    fit.max_violation = std::max({fit.max_violation, fit.lo - v, v - fit.hi});
  }

  const double w_first = fit.widths_by_radius.front();
  const double w_last = fit.widths_by_radius.back();
  bool flat = true;
  for (std::size_t i = 0; i < fit.widths_by_radius.size(); ++i) {
    flat = flat && fit.widths_by_radius[i] < options.flat_tol + fit.noise_by_radius[i];
  }
  fit.growth = w_last / std::max(w_first, 1e-300);
  if (flat) {
    fit.verdict = SlabVerdict::sandwiched;
  } else {
    fit.verdict = fit.growth > options.growth_factor ? SlabVerdict::not_sandwiched : SlabVerdict::sandwiched;
  }
  return fit;
}

ReflectionReport reflection_isometry_check(const NormSpec& n, const Vec& z, int samples, std::uint64_t seed) {
  if (n.dim() != 2) throw InvalidArgument("reflection_isometry_check: planar norms only");
  require_same_dim(z, 2, "reflection_isometry_check");
  if (z.cwiseAbs().maxCoeff() == 0.0) throw InvalidArgument("reflection_isometry_check: z must be nonzero");
  const Bisector b(n, -z, z);
  const Vec across = make_vec({-z[1], z[0]}).normalized();
  const double reach = 8.0 * z.norm();
  const int count = std::clamp(samples / 8, 16, 64);

  std::vector<Vec> pts;
  for (int k = 0; k < count; ++k) {
    const double s = reach * (2.0 * k / (count - 1) - 1.0);
    for (const Vec& p : line_intersect(b, Vec(s * across))) pts.push_back(p);
  }
  Vec far = pts.front();
  for (const Vec& p : pts) {
    if (p.norm() > far.norm()) far = p;
  }
  ReflectionReport report;
  report.line_direction = far.normalized();
  const Vec& dir = report.line_direction;
  for (const Vec& p : pts) {
    const double off = std::abs(dir[0] * p[1] - dir[1] * p[0]);
    report.collinearity_defect = std::max(report.collinearity_defect, off / std::max(1.0, p.norm()));
  }
  report.bisector_is_line = report.collinearity_defect <= 1e-9;

  Mat basis(2, 2);
  basis.col(0) = dir;
  basis.col(1) = z;
  const Mat phi = basis * Eigen::Vector2d(1.0, -1.0).asDiagonal() * basis.inverse();
  Rng rng(seed);
  for (int k = 0; k < samples; ++k) {
    const Vec v = sphere_point(n, random_gaussian(rng, 2));
    report.isometry_residual = std::max(report.isometry_residual, std::abs(n.value(Vec(phi * v)) - 1.0));
  }
  return report;
}

}  // namespace minkres
