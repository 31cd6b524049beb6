#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "minkres/bisector.hpp"
#include "minkres/norms.hpp"

namespace minkres {

// ---------------------------------------------------------------------------
// Anchor simplices and barycentric coordinates
// ---------------------------------------------------------------------------

/// Smallest singular value of the difference matrix [p_1 - p_0, ..., p_k - p_0].
double affine_independence(const std::vector<Vec>& points);

/// Largest Euclidean distance between two of the points.
double diameter(const std::vector<Vec>& points);

/// Barycentric coordinates of x relative to the affine hull of `points`, or
/// nothing when x is farther than `tol` (scaled) from that affine hull.
std::optional<Vec> barycentric(const std::vector<Vec>& points, const Vec& x, double tol = 1e-9);

/// Euclidean distance from x to conv(points) (Lawson-Hanson NNLS).
double distance_to_hull(const std::vector<Vec>& points, const Vec& x);

/// d+1 affinely independent points of R^d.
class AnchorSet {
 public:
  explicit AnchorSet(std::vector<Vec> points);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(points_.size()); }
  const std::vector<Vec>& points() const { return points_; }
  const Vec& operator[](int j) const { return points_[static_cast<std::size_t>(j)]; }
  double scale() const { return scale_; }

 private:
  std::vector<Vec> points_;
  int dim_ = 0;
  double scale_ = 1.0;
};

struct DistanceVector {
  Vec values;
};

DistanceVector distances_from(const AnchorSet& a, const NormSpec& n, const Vec& x);

/// Barycentric coordinates clamped to [0, 1] when all are >= -1e-10, otherwise nothing.
std::optional<Vec> hull_membership(const AnchorSet& a, const Vec& x);

// ---------------------------------------------------------------------------
// Multilateration
// ---------------------------------------------------------------------------

enum class ComponentShape { point, segment, patch };

const char* to_string(ComponentShape shape);

/// A connected piece of the solution set. Points are reported as themselves,
/// segments as polygonal paths through their endpoints and corners, patches by
/// boundary samples.
struct SolutionComponent {
  ComponentShape shape = ComponentShape::point;
  std::vector<Vec> vertices;
  double residual = 0.0;
};

double distance_to_component(const SolutionComponent& c, const Vec& x);

struct MultilaterateOptions {
  int grid = 8;
  double tol = kDefaultTol;
  /// Solutions closer than this (relative to the problem scale) are merged.
  double cluster_radius = 1e-6;
};

struct Multilateration {
  std::vector<SolutionComponent> components;
  double best_residual = 0.0;
  /// Closed-form solution for inner-product norms (differences of squared distances).
  std::optional<Vec> linear_solution;
  bool crosscheck_agrees = true;

  std::vector<Vec> points() const;
};

Multilateration multilaterate(const AnchorSet& a, const NormSpec& n, const DistanceVector& r,
                              const MultilaterateOptions& options = {});

// ---------------------------------------------------------------------------
// Certificates and synthesizers
// ---------------------------------------------------------------------------

/// Witness that a norm fails the simplex-resolving property: x != y both in
/// conv(anchors), every anchor on B(x, y), anchors affinely independent.
struct CounterexampleCertificate {
  NormSpec norm;
  Vec x;
  Vec y;
  std::vector<Vec> anchors;
  double equidistance_residual = 0.0;
  double hull_margin = 0.0;
};

struct CertificateCheck {
  bool passed = false;
  double smallest_singular_value = 0.0;
  bool affine_independent = false;
  std::vector<double> residuals;
  double equidistance_residual = 0.0;
  std::optional<Vec> bary_x;
  std::optional<Vec> bary_y;
  double hull_margin = 0.0;
  double separation = 0.0;
  std::vector<std::string> failures;
};

CertificateCheck verify_certificate(const CounterexampleCertificate& cert, const NormSpec& n);

/// Recomputes the residual and hull margin fields from the certificate's own data.
void refresh_certificate(CounterexampleCertificate& cert);

/// Planar construction on a flat segment [a, b] of the unit sphere: x = a, y = b,
/// anchors -(a+b)/2, (1+s)a + b, a + (1+s)b. Works in any ambient dimension.
CounterexampleCertificate flat_segment_counterexample(const NormSpec& n, const FlatSegment& seg,
                                                      std::optional<double> s = std::nullopt);

/// Planar norms only; s = nothing doubles s from 1 until both x and y sit inside the hull.
CounterexampleCertificate srs2_counterexample(const NormSpec& n, std::optional<double> s = std::nullopt);

struct RegionSample {
  double angle = 0.0;
  double value = 0.0;
};

/// Graph of the homogeneous function whose value over m in M is the z-coordinate of
/// the bounding line direction of B(0, z) in the plane span{m, z}.
struct RegionGraph {
  Vec e1;
  Vec e2;
  Vec axis;
  std::vector<RegionSample> samples;

  Vec m(double angle) const;
  Vec cone_point(const RegionSample& s) const { return m(s.angle) + s.value * axis; }
};

RegionGraph region_graph(const NormSpec& n, const Vec& z, int num_angles = 256);

struct SignPattern {
  Vec u1;
  Vec u2;
  Vec xy1;
  Vec xy2;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  bool ordered = false;
};

struct LinearityResult {
  bool linear = false;
  double residual = 0.0;
  double oddness_defect = 0.0;
  std::optional<SignPattern> sign_pattern;
};

LinearityResult graph_linearity_test(const RegionGraph& g, double tol = 1e-8);

struct Srs3Options {
  int num_angles = 256;
  int random_directions = 8;
  double linearity_tol = 1e-8;
  int max_doublings = 48;
};

struct Srs3Trace {
  Vec z;
  SignPattern pattern;
  double mu = 0.0;
  double nu = 0.0;
  double t = 0.0;
  std::vector<double> thetas;
};

CounterexampleCertificate srs3_counterexample(const NormSpec& n, const Srs3Options& options = {},
                                              std::uint64_t seed = 0, Srs3Trace* trace = nullptr);

/// Embeds the certificate into the leading coordinates of R^n.dim() and adds anchors
/// on B(x, y) until there are n.dim() + 1 affinely independent ones.
CounterexampleCertificate lift_to_dimension(const CounterexampleCertificate& cert, const NormSpec& n,
                                            std::uint64_t seed = 0);

// ---------------------------------------------------------------------------
// Resolution check
// ---------------------------------------------------------------------------

struct ResolveBudget {
  int probes = 48;
  int probe_grid = 4;
  int starts = 12;
  int descent_rounds = 400;
  bool use_synthesizers = true;
  std::vector<CounterexampleCertificate> known;
};

struct ResolutionReport {
  bool resolving = true;
  std::optional<std::pair<Vec, Vec>> witness;
  double residual = 0.0;
  std::string method;
};

ResolutionReport is_resolving_for_hull(const AnchorSet& a, const NormSpec& n, const ResolveBudget& budget = {},
                                       std::uint64_t seed = 0);

}  // namespace minkres
