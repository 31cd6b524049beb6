#pragma once

#include <optional>
#include <string>
#include <vector>

#include "minkres/bisector.hpp"
#include "minkres/norms.hpp"

namespace minkres {

/// A point of the projective plane, stored with its first significant coordinate equal to +1.
class ProjectivePoint {
 public:
  explicit ProjectivePoint(const Vec& v);

  const Vec& rep() const { return rep_; }
  Vec unit() const { return rep_.normalized(); }

 private:
  Vec rep_;
};

/// Projective distance: norm of the cross product of unit representatives.
double projective_distance(const Vec& a, const Vec& b);

struct GaussSample {
  std::vector<ProjectivePoint> inputs;
  std::vector<ProjectivePoint> outputs;
};

enum class Definiteness { positive_definite, negative_definite, indefinite, not_applicable };

const char* to_string(Definiteness d);

struct GaussFit {
  Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
  double residual = 0.0;
  Definiteness definiteness = Definiteness::not_applicable;
};

inline constexpr double kGaussAccept = 1e-6;
inline constexpr double kGaussReject = 1e-3;

ProjectivePoint gauss_map(const NormSpec& n, const ProjectivePoint& v);

/// Samples G at `count` random directions (three-dimensional strictly convex norms).
GaussSample sample_gauss_map(const NormSpec& n, int count, std::uint64_t seed);

/// Largest |det| of unit representatives of G(v1), G(v2), G(v) with v in span{v1, v2}.
double line_preservation_test(const NormSpec& n, int trials, std::uint64_t seed);

GaussFit fit_linear(const GaussSample& g);

/// Samples and fits, doubling the sample count while the residual sits between the
/// accept and reject thresholds.
GaussFit fit_gauss_map(const NormSpec& n, int count, std::uint64_t seed, int max_resamples = 3);

enum class NormClass { euclidean, strictly_convex_non_euclidean, non_strictly_convex };

const char* to_string(NormClass c);

struct ClassifyBudget {
  int directions = 256;
  int pairs = 256;
  int gauss_samples = 64;
  int reflection_probes = 4;
};

struct ClassifyEvidence {
  bool strictly_convex = true;
  std::optional<FlatSegment> flat_witness;
  int sampled_flat_chords = 0;
  int sampled_chords = 0;
  double max_parallelogram_defect = 0.0;
  bool parallelogram_zero = false;
  std::optional<GaussFit> gauss;
  std::optional<double> line_defect;
  std::vector<ReflectionReport> reflections;
  std::vector<std::string> conflicts;
};

struct Classification {
  NormClass cls = NormClass::euclidean;
  ClassifyEvidence evidence;
  bool conflict() const { return !evidence.conflicts.empty(); }
};

Classification classify_norm(const NormSpec& n, const ClassifyBudget& budget = {}, std::uint64_t seed = 0);

}  // namespace minkres
