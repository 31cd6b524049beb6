#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>

#include "minkres/resolve.hpp"

namespace minkres {

namespace {

struct Problem {
  const AnchorSet& anchors;
  const NormSpec& norm;
  const Vec& r;
  double scale;
  double target;
  Mat to_bary;

  Vec bary(const Vec& x) const {
    Vec lambda(anchors.size());
    lambda.tail(anchors.dim()) = to_bary * (x - anchors[0]);
    lambda[0] = 1.0 - lambda.tail(anchors.dim()).sum();
    return lambda;
  }

  Vec residuals(const Vec& x) const {
    Vec out(anchors.size());
    for (int j = 0; j < anchors.size(); ++j) out[j] = norm.value(Vec(x - anchors[j])) - r[j];
    return out;
  }
  double max_residual(const Vec& x) const { return residuals(x).cwiseAbs().maxCoeff(); }
  Mat jacobian(const Vec& x) const {
    Mat j(anchors.size(), anchors.dim());
    for (int k = 0; k < anchors.size(); ++k) j.row(k) = norm.subgradient(Vec(x - anchors[k])).transpose();
    return j;
  }
  bool in_hull(const Vec& x) const { return bary(x).minCoeff() >= -1e-9; }
  bool feasible(const Vec& x) const { return max_residual(x) <= target && in_hull(x); }

  // Euclidean projection of the barycentric coordinates onto the probability simplex.
  Vec clamp(const Vec& x) const {
    const Vec lambda = bary(x);
    if (lambda.minCoeff() >= 0.0) return x;
    std::vector<double> sorted(lambda.data(), lambda.data() + lambda.size());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double cumulative = 0.0;
    double shift = 0.0;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
      cumulative += sorted[k];
      const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
      if (sorted[k] - candidate > 0.0) shift = candidate;
    }
    Vec out = Vec::Zero(x.size());
    for (int j = 0; j < anchors.size(); ++j) out += std::max(0.0, lambda[j] - shift) * anchors[j];
    return out;
  }
};

void barycentric_grid(int parts, int count, std::vector<int>& current, const std::function<void(const std::vector<int>&)>& emit) {
  if (static_cast<int>(current.size()) == count - 1) {
    int used = 0;
    for (int c : current) used += c;
    current.push_back(parts - used);
    emit(current);
    current.pop_back();
    return;
  }
  int used = 0;
  for (int c : current) used += c;
  for (int k = 0; k <= parts - used; ++k) {
    current.push_back(k);
    barycentric_grid(parts, count, current, emit);
    current.pop_back();
  }
}

// Damped Gauss-Newton on the residual vector, then a shrinking-step pattern search
// on the max-residual for non-smooth stalls. Every trial is clamped into the hull.
Vec polish(const Problem& p, Vec x) {
  const int d = p.anchors.dim();
  double damping = 1e-9;
  Vec res = p.residuals(x);
  for (int it = 0; it < 60; ++it) {
    if (res.cwiseAbs().maxCoeff() <= 1e-3 * p.target) break;
    const Mat j = p.jacobian(x);
    const Mat jtj = j.transpose() * j;
    const Vec g = j.transpose() * res;
    const double diag = std::max(1e-12, jtj.trace() / d);
    bool accepted = false;
    for (int tries = 0; tries < 10; ++tries) {
      const Mat lhs = jtj + damping * diag * Mat::Identity(d, d);
      const Vec step = lhs.ldlt().solve(-g);
      if (!step.allFinite()) break;
      const Vec trial = p.clamp(x + step);
      const Vec trial_res = p.residuals(trial);
      if (trial_res.squaredNorm() < res.squaredNorm()) {
        x = trial;
        res = trial_res;
        damping = std::max(1e-12, damping * 0.25);
        accepted = true;
        break;
      }
      damping *= 8.0;
    }
    if (!accepted) break;
  }

  double best = res.cwiseAbs().maxCoeff();
  if (best > p.target && best < 1e-2 * p.scale) {
    int evals = 0;
    for (double step = 1e-3 * p.scale; step > 1e-15 * p.scale && evals < 6000;) {
      bool improved = false;
      for (int i = 0; i < d; ++i) {
        for (double sgn : {1.0, -1.0}) {
          Vec trial = x;
          trial[i] += sgn * step;
          trial = p.clamp(trial);
          const double f = p.max_residual(trial);
          ++evals;
          if (f < best) {
            best = f;
            x = trial;
            improved = true;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
  }
  return x;
}

Vec walk(const Problem& p, const Vec& x, const Vec& u, double first_step) {
  const double limit = 4.0 * p.anchors.scale();
  double ok = 0.0;
  double bad = first_step;
  while (p.feasible(x + bad * u)) {
    ok = bad;
    bad *= 2.0;
    if (bad > limit) return x + ok * u;
  }
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (ok + bad);
    if (mid == ok || mid == bad) break;
    if (p.feasible(x + mid * u))
      ok = mid;
    else
      bad = mid;
  }
  return x + ok * u;
}

// Directions along which the solution set continues from x: tangents of every
// (d-1)-subset of spheres, kept when a short step stays feasible.
std::vector<Vec> continuum_directions(const Problem& p, const Vec& x, double probe) {
  const int d = p.anchors.dim();
  const int m = p.anchors.size();
  const Mat j = p.jacobian(x);
  std::vector<Vec> candidates;
  std::vector<int> subset;
  std::function<void(int)> choose = [&](int start) {
    if (static_cast<int>(subset.size()) == d - 1) {
      Mat rows(d - 1, d);
      for (int k = 0; k < d - 1; ++k) rows.row(k) = j.row(subset[static_cast<std::size_t>(k)]);
      Eigen::JacobiSVD<Mat> svd(rows, Eigen::ComputeFullV);
      candidates.push_back(svd.matrixV().col(d - 1));
      return;
    }
    for (int k = start; k < m; ++k) {
      subset.push_back(k);
      choose(k + 1);
      subset.pop_back();
    }
  };
  choose(0);
  Eigen::JacobiSVD<Mat> full(j, Eigen::ComputeFullV);
  const Vec sv = full.singularValues();
  for (int k = 0; k < d; ++k) {
    if (k >= sv.size() || sv[k] <= 1e-8 * std::max(1e-300, sv[0])) candidates.push_back(full.matrixV().col(k));
  }

  std::vector<Vec> basis;
  for (const Vec& c : candidates) {
    if (!(p.feasible(x + probe * c) || p.feasible(x - probe * c))) continue;
    Vec v = c;
    for (const Vec& b : basis) v -= v.dot(b) * b;
    if (v.norm() > 1e-6) basis.push_back(v.normalized());
  }
  return basis;
}

// Follows a one-dimensional piece of the solution set through its corners.
std::vector<Vec> follow_path(const Problem& p, const Vec& x, Vec u, double probe, double merge_radius) {
  std::vector<Vec> path;
  Vec cur = x;
  for (int piece = 0; piece < 32; ++piece) {
    const Vec end = walk(p, cur, u, probe);
    if ((end - cur).norm() <= merge_radius) break;
    path.push_back(end);
    std::optional<Vec> next;
    for (const Vec& c : continuum_directions(p, end, probe)) {
      for (double sgn : {1.0, -1.0}) {
        const Vec v = sgn * c;
        if (v.dot(u) < -0.999 || v.dot(u) > 0.999 || !p.feasible(end + probe * v)) continue;
        if (!next || v.dot(u) > next->dot(u)) next = v;
      }
    }
    if (!next) break;
    cur = end;
    u = *next;
  }
  return path;
}

SolutionComponent build_component(const Problem& p, const Vec& x, double merge_radius) {
  const int d = p.anchors.dim();
  const double probe = 2.0 * merge_radius;
  const std::vector<Vec> dirs = continuum_directions(p, x, probe);
  SolutionComponent c;
  c.residual = p.max_residual(x);
  if (dirs.empty()) {
    c.vertices = {x};
    return c;
  }
  if (dirs.size() == 1) {
    std::vector<Vec> hi = follow_path(p, x, dirs[0], probe, merge_radius);
    std::vector<Vec> lo = follow_path(p, x, Vec(-dirs[0]), probe, merge_radius);
    if (hi.empty()) hi.push_back(x);
    if (lo.empty()) lo.push_back(x);
    if ((hi.front() - lo.front()).norm() <= merge_radius) {
      c.vertices = {x};
      return c;
    }
    c.shape = ComponentShape::segment;
    c.vertices.assign(lo.rbegin(), lo.rend());
    c.vertices.insert(c.vertices.end(), hi.begin(), hi.end());
    const Vec& first = c.vertices.front();
    const Vec& last = c.vertices.back();
    if (std::lexicographical_compare(last.data(), last.data() + last.size(), first.data(), first.data() + first.size())) {
      std::reverse(c.vertices.begin(), c.vertices.end());
    }
    for (const Vec& v : c.vertices) c.residual = std::max(c.residual, p.max_residual(v));
    return c;
  }
  c.shape = ComponentShape::patch;
  const int k = static_cast<int>(dirs.size());
  const int rays = k == 2 ? 48 : 96;
  Rng rng(derive_seed(0x5eed, static_cast<std::uint64_t>(d)));
  for (int i = 0; i < rays; ++i) {
    Vec coeff(k);
    if (k == 2) {
      const double th = 2.0 * 3.14159265358979323846 * i / rays;
      coeff << std::cos(th), std::sin(th);
    } else {
      coeff = random_unit(rng, k);
    }
    Vec u = Vec::Zero(d);
    for (int q = 0; q < k; ++q) u += coeff[q] * dirs[static_cast<std::size_t>(q)];
    c.vertices.push_back(walk(p, x, u.normalized(), probe));
  }
  return c;
}

bool lex_less(const Vec& a, const Vec& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

}  // namespace

std::vector<Vec> Multilateration::points() const {
  std::vector<Vec> out;
  for (const SolutionComponent& c : components) {
    if (c.shape == ComponentShape::patch) {
      out.push_back(c.vertices.front());
    } else {
      out.insert(out.end(), c.vertices.begin(), c.vertices.end());
    }
  }
  return out;
}

Multilateration multilaterate(const AnchorSet& a, const NormSpec& n, const DistanceVector& r,
                              const MultilaterateOptions& options) {
  if (n.dim() != a.dim()) throw DimensionMismatch("multilaterate: norm and anchors differ in dimension");
  if (r.values.size() != a.size()) throw DimensionMismatch("multilaterate: expected one distance per anchor");
  if (!(options.tol > 0.0) || options.grid < 1) throw InvalidArgument("multilaterate: invalid options");
  int zeros = 0;
  for (int j = 0; j < a.size(); ++j) {
    if (!std::isfinite(r.values[j]) || r.values[j] < 0.0) throw InvalidArgument("multilaterate: distances must be finite and nonnegative");
    if (r.values[j] == 0.0) ++zeros;
  }
  if (zeros > 1) throw InfeasibleDistances("two anchors cannot both be at distance zero");
  double reach = 0.0;
  for (int j = 0; j < a.size(); ++j) {
    double far = 0.0;
    for (int k = 0; k < a.size(); ++k) far = std::max(far, n.value(Vec(a[k] - a[j])));
    reach = std::max(reach, far);
    if (r.values[j] > far * (1.0 + 1e-9) + options.tol * std::max(1.0, far)) {
      throw InfeasibleDistances("distance " + std::to_string(j) + " exceeds every hull point's distance to that anchor");
    }
  }

  const double scale = std::max({1.0, reach, r.values.maxCoeff()});
  Mat diff(a.dim(), a.dim());
  for (int j = 1; j < a.size(); ++j) diff.col(j - 1) = a[j] - a[0];
  const Problem problem{a, n, r.values, scale, options.tol * scale, diff.inverse()};
  const double merge_radius = options.cluster_radius * scale;
  const int d = a.dim();

  Multilateration out;
  std::vector<Vec> seeds;
  if (n.is_inner_product()) {
    const Mat g = n.kind() == NormKind::ellipsoidal ? n.q() : Mat::Identity(d, d);
    Mat lhs(d, d);
    Vec rhs(d);
    for (int j = 1; j <= d; ++j) {
      lhs.row(j - 1) = 2.0 * (a[j] - a[0]).transpose() * g;
      rhs[j - 1] = r.values[0] * r.values[0] - r.values[j] * r.values[j] + a[j].dot(g * a[j]) - a[0].dot(g * a[0]);
    }
    out.linear_solution = lhs.fullPivLu().solve(rhs);
    seeds.push_back(*out.linear_solution);
  }
  for (int j = 0; j < a.size(); ++j)
    if (r.values[j] == 0.0) seeds.push_back(a[j]);
  std::vector<int> current;
  barycentric_grid(options.grid, a.size(), current, [&](const std::vector<int>& parts) {
    Vec x = Vec::Zero(d);
    for (int j = 0; j < a.size(); ++j) x += (static_cast<double>(parts[static_cast<std::size_t>(j)]) / options.grid) * a[j];
    seeds.push_back(x);
  });

  std::vector<std::pair<double, Vec>> solutions;
  out.best_residual = std::numeric_limits<double>::infinity();
  for (const Vec& seed : seeds) {
    const Vec x = polish(problem, seed);
    const double f = problem.max_residual(x);
    if (problem.in_hull(x)) out.best_residual = std::min(out.best_residual, f);
    if (f <= problem.target && problem.in_hull(x)) solutions.emplace_back(f, x);
  }
  std::stable_sort(solutions.begin(), solutions.end(), [](const auto& l, const auto& r2) { return l.first < r2.first; });

  for (const auto& [f, x] : solutions) {
    bool known = false;
    for (const SolutionComponent& c : out.components) known = known || distance_to_component(c, x) <= merge_radius;
    if (known) continue;
    SolutionComponent c = build_component(problem, x, merge_radius);
    // A continuum supersedes isolated points it passes through.
    if (c.shape != ComponentShape::point) {
      std::erase_if(out.components, [&](const SolutionComponent& old) {
        return old.shape == ComponentShape::point && distance_to_component(c, old.vertices.front()) <= merge_radius;
      });
    }
    out.components.push_back(std::move(c));
  }
  std::sort(out.components.begin(), out.components.end(), [](const SolutionComponent& l, const SolutionComponent& r2) {
    return lex_less(l.vertices.front(), r2.vertices.front());
  });

  if (out.linear_solution) {
    const Vec& xl = *out.linear_solution;
    const bool valid = problem.feasible(xl);
    out.crosscheck_agrees = valid ? (out.components.size() == 1 && distance_to_component(out.components.front(), xl) <= merge_radius)
                                  : out.components.empty();
  }
  return out;
}

}  // namespace minkres
