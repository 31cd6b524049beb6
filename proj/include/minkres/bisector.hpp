#pragma once

#include <optional>
#include <vector>

#include "minkres/norms.hpp"

namespace minkres {

/// B(x, y) = {z : ||z - x|| = ||z - y||} for distinct x, y.
struct Bisector {
  Bisector(NormSpec norm, Vec x, Vec y);

  NormSpec norm;
  Vec x;
  Vec y;

  /// h(z) = ||z - x|| - ||z - y||; zero exactly on the bisector.
  double gap(const Vec& z) const { return norm.value(Vec(z - x)) - norm.value(Vec(z - y)); }
};

struct Membership {
  bool member = false;
  double residual = 0.0;
};

Membership membership(const Bisector& b, const Vec& z, double tol = kDefaultTol);

/// Intersection of B(x, y) with the line {anchor + t (y - x)}. One point when the
/// intersection is a singleton, otherwise the two extreme points of the interval.
std::vector<Vec> line_intersect(const Bisector& b, const Vec& anchor, double tol = kDefaultTol,
                                int max_iterations = 50);

struct AffineLine {
  Vec point;
  Vec direction;
};

struct RegionBounds {
  Vec p;
  AffineLine line_through_x;
  AffineLine line_through_y;
};

std::optional<RegionBounds> region_bounds(const Bisector& b, const std::optional<Plane2>& plane = std::nullopt);

struct FlatRayCone {
  Vec apex;
  Vec gen_a;
  Vec gen_b;

  Vec at(double s, double t) const { return apex + s * gen_a + t * gen_b; }
};

FlatRayCone flat_ray_cone(const Bisector& b, const FlatSegment& seg);

enum class SlabVerdict { sandwiched, not_sandwiched };

const char* to_string(SlabVerdict v);

struct SlabOptions {
  /// Radii in units of ||x - y||, measured from the midpoint; empty means {1, 4, 16, 64}.
  std::vector<double> radii;
  int samples_per_radius = 64;
  std::uint64_t seed = 0;
  double growth_factor = 4.0;
  double flat_tol = 1e-8;
  int direction_grid = 2000;
};

struct BisectorSample {
  double radius = 0.0;
  Vec point;
  double residual = 0.0;
  /// Distance along y - x within which rounding hides the exact root.
  double uncertainty = 0.0;
};

struct SlabFit {
  Vec normal;
  double lo = 0.0;
  double hi = 0.0;
  double max_violation = 0.0;
  double sample_radius = 0.0;
  std::vector<double> radii;
  std::vector<double> widths_by_radius;
  /// Width attributable to root-finding noise; widths below flat_tol plus this count as flat.
  std::vector<double> noise_by_radius;
  double growth = 1.0;
  SlabVerdict verdict = SlabVerdict::sandwiched;
  std::vector<BisectorSample> samples;
};

SlabFit slab_fit(const Bisector& b, const SlabOptions& options = {});

/// Width of the thinnest slab containing `points`, with its unit normal.
struct SlabWidth {
  Vec normal;
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};
SlabWidth thinnest_slab(const std::vector<Vec>& points, int direction_grid, std::uint64_t seed);

struct ReflectionReport {
  bool bisector_is_line = false;
  double isometry_residual = 0.0;
  double collinearity_defect = 0.0;
  Vec line_direction;
};

/// Tests whether B(-z, z) is a line through 0 and, if so, whether the linear map fixing
/// that line and sending z to -z is an isometry. Planar norms only.
ReflectionReport reflection_isometry_check(const NormSpec& n, const Vec& z, int samples, std::uint64_t seed);

}  // namespace minkres
