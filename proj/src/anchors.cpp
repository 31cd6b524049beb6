#include <algorithm>
#include <cmath>

#include "minkres/resolve.hpp"

namespace minkres {

namespace {

Mat differences(const std::vector<Vec>& points) {
  const Eigen::Index d = points.front().size();
  Mat diff(d, static_cast<Eigen::Index>(points.size()) - 1);
  for (std::size_t j = 1; j < points.size(); ++j) diff.col(static_cast<Eigen::Index>(j) - 1) = points[j] - points[0];
  return diff;
}

// Lawson-Hanson active-set NNLS: argmin ||A w - b|| subject to w >= 0.
Vec nnls(const Mat& a, const Vec& b) {
  const Eigen::Index n = a.cols();
  Vec w = Vec::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  const double eps = 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff());

  auto solve_passive = [&]() {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < n; ++j)
      if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
    Mat ap(a.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) ap.col(static_cast<Eigen::Index>(k)) = a.col(idx[k]);
    const Vec sp = ap.colPivHouseholderQr().solve(b);
    Vec s = Vec::Zero(n);
    for (std::size_t k = 0; k < idx.size(); ++k) s[idx[k]] = sp[static_cast<Eigen::Index>(k)];
    return s;
  };

  for (int outer = 0; outer < 3 * n + 10; ++outer) {
    const Vec grad = a.transpose() * (b - a * w);
    Eigen::Index best = -1;
    double best_val = eps;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[static_cast<std::size_t>(j)] && grad[j] > best_val) {
        best_val = grad[j];
        best = j;
      }
    }
    if (best < 0) break;
    passive[static_cast<std::size_t>(best)] = true;
    for (int inner = 0; inner < 3 * n + 10; ++inner) {
      const Vec s = solve_passive();
      bool feasible = true;
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[static_cast<std::size_t>(j)] && s[j] <= 0.0) feasible = false;
      if (feasible) {
        w = s;
        break;
      }
      double alpha = 1.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && s[j] <= 0.0) alpha = std::min(alpha, w[j] / (w[j] - s[j]));
      }
      w += alpha * (s - w);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && w[j] <= eps) {
          passive[static_cast<std::size_t>(j)] = false;
          w[j] = 0.0;
        }
      }
    }
  }
  return w;
}

double distance_to_segment(const Vec& a, const Vec& b, const Vec& x) {
  const Vec ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (x - a).norm();
  const double t = std::clamp((x - a).dot(ab) / len2, 0.0, 1.0);
  return (x - (a + t * ab)).norm();
}

}  // namespace

double affine_independence(const std::vector<Vec>& points) {
  if (points.size() < 2) return std::numeric_limits<double>::infinity();
  const Mat diff = differences(points);
  if (diff.cols() > diff.rows()) return 0.0;
  Eigen::JacobiSVD<Mat> svd(diff);
  return svd.singularValues().minCoeff();
}

double diameter(const std::vector<Vec>& points) {
  double best = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) best = std::max(best, (points[i] - points[j]).norm());
  return best;
}

std::optional<Vec> barycentric(const std::vector<Vec>& points, const Vec& x, double tol) {
  if (points.empty()) return std::nullopt;
  const Eigen::Index k = static_cast<Eigen::Index>(points.size());
  Vec lambda = Vec::Zero(k);
  if (k == 1) {
    if ((x - points[0]).norm() > tol * std::max(1.0, x.norm())) return std::nullopt;
    lambda[0] = 1.0;
    return lambda;
  }
  const Mat diff = differences(points);
  const Vec rhs = x - points[0];
  const Vec mu = diff.colPivHouseholderQr().solve(rhs);
  const double scale = std::max({1.0, diameter(points), rhs.norm()});
  if ((diff * mu - rhs).norm() > tol * scale) return std::nullopt;
  lambda[0] = 1.0 - mu.sum();
  lambda.tail(k - 1) = mu;
  return lambda;
}

double distance_to_hull(const std::vector<Vec>& points, const Vec& x) {
  const Eigen::Index d = x.size();
  const Eigen::Index k = static_cast<Eigen::Index>(points.size());
  const double weight = 1e3 * std::max({1.0, diameter(points), x.norm()});
  Mat a(d + 1, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    a.col(j).head(d) = points[static_cast<std::size_t>(j)];
    a(d, j) = weight;
  }
  Vec b(d + 1);
  b.head(d) = x;
  b[d] = weight;
  Vec w = nnls(a, b);
  const double total = w.sum();
  if (total <= 0.0) return (x - points.front()).norm();
  w /= total;
  Vec p = Vec::Zero(d);
  for (Eigen::Index j = 0; j < k; ++j) p += w[j] * points[static_cast<std::size_t>(j)];
  return (p - x).norm();
}

AnchorSet::AnchorSet(std::vector<Vec> points) : points_(std::move(points)) {
  if (points_.empty()) throw DegenerateAnchors("anchor set is empty");
  dim_ = static_cast<int>(points_.front().size());
  if (dim_ < 2) throw DegenerateAnchors("anchor dimension must be at least 2");
  if (static_cast<int>(points_.size()) != dim_ + 1) {
    throw DegenerateAnchors("expected " + std::to_string(dim_ + 1) + " anchors in dimension " + std::to_string(dim_) +
                            ", got " + std::to_string(points_.size()));
  }
  for (const Vec& p : points_) {
    require_same_dim(p, dim_, "anchor");
    if (!p.allFinite()) throw DegenerateAnchors("anchor has non-finite coordinates");
  }
  scale_ = std::max(1.0, diameter(points_));
  if (affine_independence(points_) <= 1e-10 * scale_) throw DegenerateAnchors("anchors are not affinely independent");
}

DistanceVector distances_from(const AnchorSet& a, const NormSpec& n, const Vec& x) {
  if (n.dim() != a.dim()) throw DimensionMismatch("distances_from: norm and anchors differ in dimension");
  require_same_dim(x, a.dim(), "distances_from");
  require_finite(x, "distances_from");
  Vec r(a.size());
  for (int j = 0; j < a.size(); ++j) r[j] = n.value(Vec(x - a[j]));
  return {r};
}

std::optional<Vec> hull_membership(const AnchorSet& a, const Vec& x) {
  require_same_dim(x, a.dim(), "hull_membership");
  auto lambda = barycentric(a.points(), x);
  if (!lambda || lambda->minCoeff() < -1e-10) return std::nullopt;
  return Vec(lambda->cwiseMax(0.0).cwiseMin(1.0));
}

const char* to_string(ComponentShape shape) {
  switch (shape) {
    case ComponentShape::point:
      return "point";
    case ComponentShape::segment:
      return "segment";
    case ComponentShape::patch:
      return "patch";
  }
  return "unknown";
}

double distance_to_component(const SolutionComponent& c, const Vec& x) {
  switch (c.shape) {
    case ComponentShape::point:
      return (x - c.vertices.front()).norm();
    case ComponentShape::segment:
    {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i + 1 < c.vertices.size(); ++i) best = std::min(best, distance_to_segment(c.vertices[i], c.vertices[i + 1], x));
      return best;
    }
    case ComponentShape::patch:
      return distance_to_hull(c.vertices, x);
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace minkres
