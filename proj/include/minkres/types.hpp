#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace minkres {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Absolute tolerance on unit-scale quantities; callers scale by max(1, magnitude).
inline constexpr double kDefaultTol = 1e-9;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class InvalidNormSpec : public Error {
 public:
  using Error::Error;
};

class DegenerateAnchors : public Error {
 public:
  using Error::Error;
};

class InfeasibleDistances : public Error {
 public:
  using Error::Error;
};

class NormIsStrictlyConvex : public Error {
 public:
  using Error::Error;
};

class NormIsEuclidean : public Error {
 public:
  using Error::Error;
};

class NoSignPattern : public Error {
 public:
  using Error::Error;
};

class NotStrictlyConvex : public Error {
 public:
  using Error::Error;
};

void require_finite(const Vec& v, const char* what);
void require_same_dim(const Vec& a, int dim, const char* what);

Vec make_vec(std::initializer_list<double> values);
Vec make_vec(const std::vector<double>& values);
std::vector<double> to_std(const Vec& v);

/// Flips the sign so the first coordinate with magnitude above 1e-12 * max|v_i| is positive.
Vec sign_normalized(const Vec& v);

/// Orthonormal basis of span{u, v} whose first vector is u / |u|.
std::pair<Vec, Vec> orthonormal_pair(const Vec& u, const Vec& v);

/// A two-dimensional linear subspace of R^d given by a spanning pair.
struct Plane2 {
  Vec u;
  Vec v;
};

/// Deterministic seed derivation (splitmix64) so independent sub-searches stay reproducible.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

using Rng = std::mt19937_64;

Vec random_gaussian(Rng& rng, int dim);
Vec random_unit(Rng& rng, int dim);

}  // namespace minkres
