#include "minkres/types.hpp"

#include <cmath>

namespace minkres {

void require_finite(const Vec& v, const char* what) {
  if (!v.allFinite()) {
    throw InvalidArgument(std::string(what) + ": non-finite coordinate");
  }
}

void require_same_dim(const Vec& a, int dim, const char* what) {
  if (a.size() != dim) {
    throw DimensionMismatch(std::string(what) + ": expected dimension " + std::to_string(dim) +
                            ", got " + std::to_string(a.size()));
  }
}

Vec make_vec(std::initializer_list<double> values) {
  Vec v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

Vec make_vec(const std::vector<double>& values) {
  return Eigen::Map<const Vec>(values.data(), static_cast<Eigen::Index>(values.size()));
}

std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

Vec sign_normalized(const Vec& v) {
  const double scale = v.cwiseAbs().maxCoeff();
  if (scale == 0.0) return v;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-12 * scale) {
      return v[i] < 0 ? Vec(-v) : v;
    }
  }
  return v;
}

std::pair<Vec, Vec> orthonormal_pair(const Vec& u, const Vec& v) {
  const double nu = u.norm();
  if (nu == 0.0) throw InvalidArgument("orthonormal_pair: zero first vector");
  Vec e1 = u / nu;
  Vec w = v - v.dot(e1) * e1;
  w -= w.dot(e1) * e1;
  const double nw = w.norm();
  if (nw <= 1e-12 * std::max(1.0, v.norm())) {
    throw InvalidArgument("orthonormal_pair: vectors do not span a plane");
  }
  return {e1, w / nw};
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Vec random_gaussian(Rng& rng, int dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v[i] = normal(rng);
  return v;
}

Vec random_unit(Rng& rng, int dim) {
  for (;;) {
    Vec v = random_gaussian(rng, dim);
    const double n = v.norm();
    if (n > 1e-8) return v / n;
  }
}

}  // namespace minkres
