#include "minkres/norms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace minkres {

namespace {

bool lex_less(const Vec& a, const Vec& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

double sign_of(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

// Calls fn for each k-subset of {0..m-1}, in lexicographic order.
template <typename Fn>
void for_each_subset(int m, int k, Fn&& fn) {
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == m - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

Mat enumerate_facets(const Mat& vertices) {
  const int d = static_cast<int>(vertices.rows());
  const int m = static_cast<int>(vertices.cols());
  const Vec ones = Vec::Ones(d);
  std::vector<Vec> found;
  for_each_subset(m, d, [&](const std::vector<int>& idx) {
    Mat s(d, d);
    for (int i = 0; i < d; ++i) s.row(i) = vertices.col(idx[i]).transpose();
    Eigen::FullPivLU<Mat> lu(s);
    if (lu.rank() < d) return;
    Vec normal = lu.solve(ones);
    if (!normal.allFinite()) return;
    const double worst = (vertices.transpose() * normal).maxCoeff();
    if (worst > 1.0 + 1e-9) return;
    for (const Vec& f : found) {
      if ((f - normal).cwiseAbs().maxCoeff() <= 1e-9 * std::max(1.0, f.cwiseAbs().maxCoeff())) return;
    }
    found.push_back(normal);
  });
  Mat facets(static_cast<Eigen::Index>(found.size()), d);
  for (std::size_t i = 0; i < found.size(); ++i) facets.row(static_cast<Eigen::Index>(i)) = found[i].transpose();
  return facets;
}

}  // namespace

std::string to_string(NormKind kind) {
  switch (kind) {
    case NormKind::euclidean:
      return "euclidean";
    case NormKind::ellipsoidal:
      return "ellipsoidal";
    case NormKind::p_norm:
      return "p_norm";
    case NormKind::polyhedral:
      return "polyhedral";
  }
  return "unknown";
}

NormSpec NormSpec::euclidean(int dim) {
  if (dim < 2) throw InvalidNormSpec("dimension must be at least 2");
  auto d = std::make_shared<Data>();
  d->kind = NormKind::euclidean;
  d->dim = dim;
  return NormSpec(d);
}

NormSpec NormSpec::ellipsoidal(const Mat& q) {
  if (q.rows() != q.cols() || q.rows() < 2) throw InvalidNormSpec("Q must be square with dimension >= 2");
  if (!q.allFinite()) throw InvalidNormSpec("Q has non-finite entries");
  const double scale = std::max(1.0, q.cwiseAbs().maxCoeff());
  if ((q - q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) throw InvalidNormSpec("Q must be symmetric");
  Eigen::SelfAdjointEigenSolver<Mat> eig(q);
  if (eig.eigenvalues().minCoeff() <= 1e-12 * scale) throw InvalidNormSpec("Q must be positive definite");
  auto d = std::make_shared<Data>();
  d->kind = NormKind::ellipsoidal;
  d->dim = static_cast<int>(q.rows());
  d->q = 0.5 * (q + q.transpose());
  d->q_llt.compute(d->q);
  return NormSpec(d);
}

NormSpec NormSpec::p_norm(int dim, double p) {
  if (dim < 2) throw InvalidNormSpec("dimension must be at least 2");
  if (!(p >= 1.0)) throw InvalidNormSpec("p must be >= 1");
  auto d = std::make_shared<Data>();
  d->kind = NormKind::p_norm;
  d->dim = dim;
  d->p = p;
  return NormSpec(d);
}

NormSpec NormSpec::polyhedral(const std::vector<Vec>& vertices) {
  if (vertices.empty()) throw InvalidNormSpec("polyhedral norm needs vertices");
  const int dim = static_cast<int>(vertices.front().size());
  if (dim < 2) throw InvalidNormSpec("dimension must be at least 2");
  Mat v(dim, static_cast<Eigen::Index>(vertices.size()));
  double scale = 0.0;
  for (std::size_t j = 0; j < vertices.size(); ++j) {
    if (vertices[j].size() != dim) throw InvalidNormSpec("polyhedral vertices have mixed dimensions");
    if (!vertices[j].allFinite()) throw InvalidNormSpec("polyhedral vertex is not finite");
    v.col(static_cast<Eigen::Index>(j)) = vertices[j];
    scale = std::max(scale, vertices[j].cwiseAbs().maxCoeff());
  }
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    bool mirrored = false;
    for (Eigen::Index k = 0; k < v.cols() && !mirrored; ++k) {
      mirrored = (v.col(k) + v.col(j)).cwiseAbs().maxCoeff() <= 1e-9 * std::max(1.0, scale);
    }
    if (!mirrored) throw InvalidNormSpec("polyhedral vertex set is not centrally symmetric");
  }
  Eigen::FullPivLU<Mat> lu(v);
  lu.setThreshold(1e-10);
  if (lu.rank() < dim) throw InvalidNormSpec("polyhedral vertices do not span the space");
  auto d = std::make_shared<Data>();
  d->kind = NormKind::polyhedral;
  d->dim = dim;
  d->vertices = v;
  d->facets = enumerate_facets(v);
  if (d->facets.rows() == 0) throw InvalidNormSpec("polyhedral body has no facets");
  return NormSpec(d);
}

bool NormSpec::is_inner_product() const {
  return kind() == NormKind::euclidean || kind() == NormKind::ellipsoidal ||
         (kind() == NormKind::p_norm && p() == 2.0);
}

bool NormSpec::is_strictly_convex() const {
  switch (kind()) {
    case NormKind::euclidean:
    case NormKind::ellipsoidal:
      return true;
    case NormKind::p_norm:
      return p() > 1.0 && std::isfinite(p());
    case NormKind::polyhedral:
      return false;
  }
  return false;
}

double NormSpec::value(const Vec& v) const {
  switch (kind()) {
    case NormKind::euclidean:
      return v.norm();
    case NormKind::ellipsoidal:
      return std::sqrt(std::max(0.0, v.dot(data_->q * v)));
    case NormKind::p_norm: {
      const double m = v.cwiseAbs().maxCoeff();
      if (m == 0.0) return 0.0;
      const double p = data_->p;
      if (std::isinf(p)) return m;
      if (p == 1.0) return v.cwiseAbs().sum();
      double s = 0.0;
      if (p == 2.0) {
        for (Eigen::Index i = 0; i < v.size(); ++i) s += (v[i] / m) * (v[i] / m);
        return m * std::sqrt(s);
      }
      for (Eigen::Index i = 0; i < v.size(); ++i) s += std::pow(std::abs(v[i]) / m, p);
      return m * std::pow(s, 1.0 / p);
    }
    case NormKind::polyhedral:
      return std::max(0.0, (data_->facets * v).maxCoeff());
  }
  return 0.0;
}

Vec NormSpec::subgradient(const Vec& v) const {
  const int d = dim();
  Vec g = Vec::Zero(d);
  const double nv = value(v);
  if (nv == 0.0) return g;
  switch (kind()) {
    case NormKind::euclidean:
      return v / nv;
    case NormKind::ellipsoidal:
      return data_->q * v / nv;
    case NormKind::p_norm: {
      const double p = data_->p;
      if (std::isinf(p)) {
        Eigen::Index k = 0;
        v.cwiseAbs().maxCoeff(&k);
        g[k] = sign_of(v[k]);
        return g;
      }
      if (p == 1.0) {
        for (int i = 0; i < d; ++i) g[i] = sign_of(v[i]);
        return g;
      }
      for (int i = 0; i < d; ++i) g[i] = sign_of(v[i]) * std::pow(std::abs(v[i]) / nv, p - 1.0);
      return g;
    }
    case NormKind::polyhedral: {
      Eigen::Index k = 0;
      (data_->facets * v).maxCoeff(&k);
      return data_->facets.row(k).transpose();
    }
  }
  return g;
}

NormSpec NormSpec::leading(int k) const {
  if (k < 2 || k > dim()) throw InvalidArgument("leading: invalid subspace dimension");
  switch (kind()) {
    case NormKind::euclidean:
      return euclidean(k);
    case NormKind::ellipsoidal:
      return ellipsoidal(data_->q.topLeftCorner(k, k));
    case NormKind::p_norm:
      return p_norm(k, data_->p);
    case NormKind::polyhedral:
      break;
  }
  throw InvalidArgument("leading: polyhedral restriction is not supported");
}

std::string NormSpec::describe() const {
  std::ostringstream os;
  os << to_string(kind()) << "(dim=" << dim();
  if (kind() == NormKind::p_norm) {
    if (std::isinf(p()))
      os << ", p=inf";
    else
      os << ", p=" << p();
  }
  if (kind() == NormKind::polyhedral) os << ", vertices=" << vertices().cols();
  os << ")";
  return os.str();
}

double eval_norm(const NormSpec& n, const Vec& v) {
  require_same_dim(v, n.dim(), "eval_norm");
  require_finite(v, "eval_norm");
  return n.value(v);
}

Vec sphere_point(const NormSpec& n, const Vec& direction) {
  const double nv = eval_norm(n, direction);
  if (nv == 0.0) throw InvalidArgument("sphere_point: zero direction");
  return direction / nv;
}

SupportContact support_contact(const NormSpec& n, const Vec& functional, double tol) {
  require_same_dim(functional, n.dim(), "support_contact");
  require_finite(functional, "support_contact");
  const double fmax = functional.cwiseAbs().maxCoeff();
  if (fmax == 0.0) throw InvalidArgument("support_contact: zero functional");
  const int d = n.dim();
  SupportContact out;
  out.direction = functional / functional.norm();
  const Vec f = functional / fmax;

  switch (n.kind()) {
    case NormKind::euclidean:
      out.point = f / f.norm();
      break;
    case NormKind::ellipsoidal: {
      Eigen::LLT<Mat> llt(n.q());
      const Vec u = llt.solve(f);
      out.point = u / n.value(u);
      break;
    }
    case NormKind::p_norm: {
      const double p = n.p();
      Vec u(d);
      if (std::isinf(p)) {
        for (int i = 0; i < d; ++i) {
          if (std::abs(f[i]) > tol) {
            u[i] = sign_of(f[i]);
          } else {
            u[i] = -1.0;
            out.is_exposed_uniquely = false;
          }
        }
      } else if (p == 1.0) {
        std::optional<Vec> best;
        int ties = 0;
        for (int i = 0; i < d; ++i) {
          if (std::abs(f[i]) >= 1.0 - tol) {
            Vec cand = Vec::Zero(d);
            cand[i] = sign_of(f[i]);
            ++ties;
            if (!best || lex_less(cand, *best)) best = cand;
          }
        }
        u = *best;
        out.is_exposed_uniquely = ties == 1;
      } else {
        for (int i = 0; i < d; ++i) u[i] = sign_of(f[i]) * std::pow(std::abs(f[i]), 1.0 / (p - 1.0));
        u /= n.value(u);
      }
      out.point = u;
      break;
    }
    case NormKind::polyhedral: {
      const Mat& v = n.vertices();
      const Vec scores = v.transpose() * f;
      const double top = scores.maxCoeff();
      const double slack = tol * std::max(1.0, std::abs(top));
      std::optional<Vec> best;
      int ties = 0;
      for (Eigen::Index j = 0; j < v.cols(); ++j) {
        if (scores[j] >= top - slack) {
          ++ties;
          const Vec cand = v.col(j);
          if (!best || lex_less(cand, *best)) best = cand;
        }
      }
      out.point = *best / n.value(*best);
      out.is_exposed_uniquely = ties == 1;
      break;
    }
  }
  return out;
}

LineMinimum line_min_norm(const NormSpec& n, const Vec& base, const Vec& dir) {
  const double nd = n.value(dir);
  if (nd == 0.0) throw InvalidArgument("line_min_norm: zero direction");
  // ||base + c dir|| >= |c| ||dir|| - ||base|| exceeds ||base|| outside this bracket.
  const double bound = 2.0 * n.value(base) / nd + 1e-300;
  double lo = -bound;
  double hi = bound;
  auto slope = [&](double c) { return n.subgradient(Vec(base + c * dir)).dot(dir); };
  for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (slope(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  const double glo = n.value(Vec(base + lo * dir));
  const double ghi = n.value(Vec(base + hi * dir));
  return glo <= ghi ? LineMinimum{lo, glo} : LineMinimum{hi, ghi};
}

namespace {

struct PlaneFrame {
  Vec along;   // unit vector parallel to the requested direction
  Vec normal;  // in-plane unit vector orthogonal to `along`, sign-normalized
};

PlaneFrame plane_frame(int dim, const Vec& direction, const std::optional<Plane2>& plane) {
  const double dn = direction.norm();
  if (dn == 0.0) throw InvalidArgument("zero direction");
  if (!plane) {
    if (dim != 2) throw InvalidArgument("a containing 2D plane is required when dim > 2");
    Vec along = direction / dn;
    Vec normal(2);
    normal << -along[1], along[0];
    return {along, sign_normalized(normal)};
  }
  require_same_dim(plane->u, dim, "plane");
  require_same_dim(plane->v, dim, "plane");
  const auto [e1, e2] = orthonormal_pair(plane->u, plane->v);
  const Vec in_plane = direction.dot(e1) * e1 + direction.dot(e2) * e2;
  if ((direction - in_plane).norm() > 1e-9 * dn) throw InvalidArgument("direction does not lie in the plane");
  const Vec& partner = std::abs(e1.dot(direction)) < std::abs(e2.dot(direction)) ? e1 : e2;
  auto [along, normal] = orthonormal_pair(direction, partner);
  return {along, sign_normalized(normal)};
}

}  // namespace

Vec planar_support_parallel_to(const NormSpec& n, const Vec& along, const Plane2& plane) {
  require_same_dim(along, n.dim(), "planar_support_parallel_to");
  const PlaneFrame frame = plane_frame(n.dim(), along, plane);
  const LineMinimum lm = line_min_norm(n, frame.normal, frame.along);
  return (frame.normal + lm.c * frame.along) / lm.value;
}

std::optional<FlatSegment> flat_segment_parallel_to(const NormSpec& n, const Vec& direction,
                                                    const std::optional<Plane2>& plane, double tol) {
  require_same_dim(direction, n.dim(), "flat_segment_parallel_to");
  require_finite(direction, "flat_segment_parallel_to");
  const PlaneFrame frame = plane_frame(n.dim(), direction, plane);
  if (n.is_strictly_convex()) return std::nullopt;

  const Vec& w = frame.normal;
  const Vec& d = frame.along;
  const LineMinimum lm = line_min_norm(n, w, d);
  const double level = lm.value * (1.0 + 1e-12);
  auto g = [&](double c) { return n.value(Vec(w + c * d)); };
  const double reach = (level + n.value(w)) / n.value(d) + 1.0;

  auto walk = [&](double inside, double outside) {
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (inside + outside);
      if (mid == inside || mid == outside) break;
      if (g(mid) <= level)
        inside = mid;
      else
        outside = mid;
    }
    return inside;
  };
  const double c_hi = walk(lm.c, lm.c + reach);
  const double c_lo = walk(lm.c, lm.c - reach);

  const Vec a = (w + c_hi * d) / lm.value;
  const Vec b = (w + c_lo * d) / lm.value;
  if ((a - b).norm() <= std::max(1e-6, 1e3 * tol)) return std::nullopt;
  FlatSegment seg{a, b, (a - b).dot(direction) / direction.squaredNorm()};
  return seg;
}

double parallelogram_defect(const NormSpec& n, const Vec& x, const Vec& y) {
  require_same_dim(x, n.dim(), "parallelogram_defect");
  require_same_dim(y, n.dim(), "parallelogram_defect");
  const double nx = n.value(x);
  const double ny = n.value(y);
  const double np = n.value(Vec(x + y));
  const double nm = n.value(Vec(x - y));
  return 2.0 * (nx * nx + ny * ny) - (np * np + nm * nm);
}

StrictConvexityReport strict_convexity_probe(const NormSpec& n, int num_directions, std::uint64_t seed) {
  if (num_directions < 1) throw InvalidArgument("strict_convexity_probe: num_directions must be >= 1");
  const int d = n.dim();
  StrictConvexityReport report;

  Rng rng(seed);
  for (int k = 0; k < num_directions; ++k) {
    const Vec u = sphere_point(n, random_gaussian(rng, d));
    const Vec v = sphere_point(n, Vec(u + 0.25 * random_gaussian(rng, d)));
    if ((u - v).norm() < 1e-6) continue;
    ++report.sampled_chords;
    if (n.value(Vec(0.5 * (u + v))) >= 1.0 - 1e-12) ++report.sampled_flat_chords;
  }

  if (n.is_strictly_convex()) return report;
  report.strictly_convex = false;

  const Vec e1 = Vec::Unit(d, 0);
  const Vec e2 = Vec::Unit(d, 1);
  if (n.kind() == NormKind::p_norm && std::isinf(n.p())) {
    report.witness = flat_segment_parallel_to(n, -e1, Plane2{e1, e2});
  } else if (n.kind() == NormKind::p_norm) {
    report.witness = flat_segment_parallel_to(n, Vec(e1 - e2), Plane2{e1, e2});
  } else {
    const Mat& v = n.vertices();
    for (Eigen::Index i = 0; i < v.cols() && !report.witness; ++i) {
      for (Eigen::Index j = i + 1; j < v.cols() && !report.witness; ++j) {
        const Vec vi = v.col(i);
        const Vec vj = v.col(j);
        const double scale = std::max(1.0, vi.norm());
        if ((vi - vj).norm() < 1e-9 * scale || (vi + vj).norm() < 1e-9 * scale) continue;
        const Vec ui = vi / n.value(vi);
        const Vec uj = vj / n.value(vj);
        if (n.value(Vec(0.5 * (ui + uj))) < 1.0 - 1e-12) continue;
        if (std::abs(ui.normalized().dot(uj.normalized())) > 1.0 - 1e-12) continue;
        report.witness = flat_segment_parallel_to(n, Vec(ui - uj), Plane2{ui, uj});
      }
    }
  }
  return report;
}

}  // namespace minkres
