#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "minkres/types.hpp"

namespace minkres {

enum class NormKind { euclidean, ellipsoidal, p_norm, polyhedral };

std::string to_string(NormKind kind);

/// A symmetric norm on R^dim. Immutable; copies share the underlying data.
///
/// Polyhedral norms are the Minkowski functional of conv(vertices). The vertex
/// set must be centrally symmetric and span R^dim; facets are enumerated once
/// at construction so evaluation is a max over facet functionals.
class NormSpec {
 public:
  static NormSpec euclidean(int dim);
  static NormSpec ellipsoidal(const Mat& q);
  static NormSpec p_norm(int dim, double p);
  static NormSpec polyhedral(const std::vector<Vec>& vertices);

  NormKind kind() const { return data_->kind; }
  int dim() const { return data_->dim; }
  double p() const { return data_->p; }
  const Mat& q() const { return data_->q; }
  /// Vertices as columns.
  const Mat& vertices() const { return data_->vertices; }
  /// Facet functionals as rows: the unit ball is {u : F u <= 1}.
  const Mat& facets() const { return data_->facets; }

  bool is_inner_product() const;
  bool is_strictly_convex() const;

  /// Norm value without dimension checks (hot path).
  double value(const Vec& v) const;
  /// A subgradient of the norm at v (the dual functional of a contact point);
  /// zero at v = 0. Ties at kinks resolve to the first maximizing piece.
  Vec subgradient(const Vec& v) const;

  /// The same kind restricted to the leading k coordinates. Not available
  /// for polyhedral norms.
  NormSpec leading(int k) const;

  std::string describe() const;

 private:
  struct Data {
    NormKind kind{};
    int dim = 0;
    double p = 2.0;
    Mat q;
    Eigen::LLT<Mat> q_llt;
    Mat vertices;
    Mat facets;
  };
  explicit NormSpec(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
  std::shared_ptr<const Data> data_;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct SupportContact {
  Vec direction;
  Vec point;
  bool is_exposed_uniquely = true;
};

struct FlatSegment {
  Vec a;
  Vec b;
  double lambda_ratio = 0.0;
};

struct StrictConvexityReport {
  bool strictly_convex = true;
  std::optional<FlatSegment> witness;
  /// Random sphere chords whose midpoint stayed on the sphere.
  int sampled_flat_chords = 0;
  int sampled_chords = 0;
};

double eval_norm(const NormSpec& n, const Vec& v);
Vec sphere_point(const NormSpec& n, const Vec& direction);
SupportContact support_contact(const NormSpec& n, const Vec& functional, double tol = kDefaultTol);

/// Minimizer of c -> ||base + c * dir|| and the minimum. The minimizing set is
/// an interval for non-strictly convex norms; `lo`/`hi` bracket it only when
/// requested through flat_segment_parallel_to.
struct LineMinimum {
  double c = 0.0;
  double value = 0.0;
};
LineMinimum line_min_norm(const NormSpec& n, const Vec& base, const Vec& dir);

/// Contact point of the planar unit ball (ball ∩ plane) whose supporting line
/// inside the plane is parallel to `along`. Returned point has norm one.
Vec planar_support_parallel_to(const NormSpec& n, const Vec& along, const Plane2& plane);

std::optional<FlatSegment> flat_segment_parallel_to(const NormSpec& n, const Vec& direction,
                                                    const std::optional<Plane2>& plane = std::nullopt,
                                                    double tol = kDefaultTol);

double parallelogram_defect(const NormSpec& n, const Vec& x, const Vec& y);

StrictConvexityReport strict_convexity_probe(const NormSpec& n, int num_directions, std::uint64_t seed);

}  // namespace minkres
