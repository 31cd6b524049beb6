#include <algorithm>
#include <cmath>

#include "minkres/resolve.hpp"

namespace minkres {

namespace {

Vec random_hull_point(const AnchorSet& a, Rng& rng) {
  std::exponential_distribution<double> expo(1.0);
  Vec lambda(a.size());
  for (int j = 0; j < a.size(); ++j) lambda[j] = expo(rng);
  lambda /= lambda.sum();
  Vec x = Vec::Zero(a.dim());
  for (int j = 0; j < a.size(); ++j) x += lambda[j] * a[j];
  return x;
}

double pair_residual(const AnchorSet& a, const NormSpec& n, const Vec& x, const Vec& y) {
  double worst = 0.0;
  for (int j = 0; j < a.size(); ++j) worst = std::max(worst, std::abs(n.value(Vec(x - a[j])) - n.value(Vec(y - a[j]))));
  return worst;
}

bool valid_witness(const AnchorSet& a, const NormSpec& n, const Vec& x, const Vec& y) {
  return (x - y).norm() > 1e-6 && hull_membership(a, x) && hull_membership(a, y) && pair_residual(a, n, x, y) < 1e-8;
}

bool same_anchor_set(const AnchorSet& a, const std::vector<Vec>& other) {
  if (static_cast<int>(other.size()) != a.size()) return false;
  std::vector<bool> used(other.size(), false);
  for (int j = 0; j < a.size(); ++j) {
    bool found = false;
    for (std::size_t k = 0; k < other.size() && !found; ++k) {
      if (used[k] || other[k].size() != a.dim()) continue;
      if ((other[k] - a[j]).norm() <= 1e-9 * a.scale()) {
        used[k] = true;
        found = true;
      }
    }
    if (!found) return false;
  }
  return true;
}

std::optional<std::pair<Vec, Vec>> witness_from(const Multilateration& m) {
  for (const SolutionComponent& c : m.components) {
    if (c.shape != ComponentShape::point && c.vertices.size() >= 2) return std::make_pair(c.vertices.front(), c.vertices.back());
  }
  if (m.components.size() >= 2) return std::make_pair(m.components[0].vertices.front(), m.components[1].vertices.front());
  return std::nullopt;
}

std::vector<CounterexampleCertificate> synthesized(const NormSpec& n, std::uint64_t seed) {
  std::vector<CounterexampleCertificate> out;
  try {
    if (n.dim() == 2 && !n.is_strictly_convex()) out.push_back(srs2_counterexample(n));
    if (n.dim() == 3 && n.is_strictly_convex() && !n.is_inner_product()) out.push_back(srs3_counterexample(n, {}, seed));
  } catch (const Error&) {
  }
  return out;
}

}  // namespace

ResolutionReport is_resolving_for_hull(const AnchorSet& a, const NormSpec& n, const ResolveBudget& budget, std::uint64_t seed) {
  if (n.dim() != a.dim()) throw DimensionMismatch("is_resolving_for_hull: norm and anchors differ in dimension");
  const int d = a.dim();

  auto report = [&](const Vec& x, const Vec& y, const char* method) {
    ResolutionReport r;
    r.resolving = false;
    r.witness = std::make_pair(x, y);
    r.residual = pair_residual(a, n, x, y);
    r.method = method;
    return r;
  };

  std::vector<CounterexampleCertificate> certs = budget.known;
  if (budget.use_synthesizers && !n.is_inner_product()) {
    for (CounterexampleCertificate& c : synthesized(n, seed)) certs.push_back(std::move(c));
  }
  for (const CounterexampleCertificate& c : certs) {
    if (c.x.size() != d || !same_anchor_set(a, c.anchors)) continue;
    if (valid_witness(a, n, c.x, c.y)) return report(c.x, c.y, "certificate");
  }

  MultilaterateOptions mopts;
  mopts.grid = budget.probe_grid;
  for (int k = 0; k < budget.probes; ++k) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
    const Vec x = random_hull_point(a, rng);
    const Multilateration m = multilaterate(a, n, distances_from(a, n, x), mopts);
    if (auto w = witness_from(m); w && valid_witness(a, n, w->first, w->second)) return report(w->first, w->second, "multilateration");
  }

  // Pair search in barycentric coordinates with a separation penalty.
  const double floor = 1e-2 * a.scale();
  auto objective = [&](const Vec& lx, const Vec& ly) {
    if (lx.minCoeff() < 0.0 || ly.minCoeff() < 0.0) return std::numeric_limits<double>::infinity();
    Vec x = Vec::Zero(d);
    Vec y = Vec::Zero(d);
    for (int j = 0; j < a.size(); ++j) {
      x += lx[j] * a[j];
      y += ly[j] * a[j];
    }
    return pair_residual(a, n, x, y) + 10.0 * std::max(0.0, floor - (x - y).norm());
  };
  auto point = [&](const Vec& lambda) {
    Vec x = Vec::Zero(d);
    for (int j = 0; j < a.size(); ++j) x += lambda[j] * a[j];
    return x;
  };

  ResolutionReport best;
  best.residual = std::numeric_limits<double>::infinity();
  best.method = "pair search";
  for (int s = 0; s < budget.starts; ++s) {
    Rng rng(derive_seed(seed, 1000 + static_cast<std::uint64_t>(s)));
    std::exponential_distribution<double> expo(1.0);
    Vec lx(a.size());
    Vec ly(a.size());
    for (int j = 0; j < a.size(); ++j) {
      lx[j] = expo(rng);
      ly[j] = expo(rng);
    }
    lx /= lx.sum();
    ly /= ly.sum();
    double f = objective(lx, ly);
    double step = 0.25;
    for (int round = 0; round < budget.descent_rounds && step > 1e-12; ++round) {
      bool improved = false;
      // Moves trade weight between two vertices so the sum stays one.
      for (int which = 0; which < 2; ++which) {
        Vec& l = which == 0 ? lx : ly;
        for (int i = 0; i < a.size(); ++i) {
          for (int j = 0; j < a.size(); ++j) {
            if (i == j) continue;
            Vec trial = l;
            trial[i] += step;
            trial[j] -= step;
            const double ft = which == 0 ? objective(trial, ly) : objective(lx, trial);
            if (ft < f) {
              f = ft;
              l = trial;
              improved = true;
            }
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    const Vec x = point(lx);
    const Vec y = point(ly);
    const double r = pair_residual(a, n, x, y);
    if (valid_witness(a, n, x, y)) return report(x, y, "pair search");
    if (r < best.residual) best.residual = r;
    if (r < 1e-4 * a.scale()) {
      const Multilateration m = multilaterate(a, n, distances_from(a, n, x), mopts);
      if (auto w = witness_from(m); w && valid_witness(a, n, w->first, w->second)) return report(w->first, w->second, "pair search");
    }
  }
  return best;
}

}  // namespace minkres
