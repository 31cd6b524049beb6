#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "minkres/io.hpp"

namespace minkres::cli {

namespace {

struct Config {
  std::string norm_path;
  std::optional<unsigned long long> seed;
  std::optional<double> tol;
  std::string out_path;
  std::string csv_path;
  std::optional<int> budget;

  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> radii;
  std::string anchors_path;
  std::vector<double> distances;
  int grid = 8;
  std::optional<double> s;
};

class Usage : public Error {
 public:
  using Error::Error;
};

std::uint64_t resolve_seed(const Config& cfg) {
  if (cfg.seed) return *cfg.seed;
  if (const char* env = std::getenv("MR_SEED")) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw Usage("MR_SEED must be a nonnegative integer");
  }
  return kDefaultSeed;
}

void check_paths(const Config& cfg, bool needs_anchors) {
  namespace fs = std::filesystem;
  if (cfg.norm_path.empty()) throw Usage("--norm is required");
  if (!fs::is_regular_file(cfg.norm_path)) throw Usage("norm file not found: " + cfg.norm_path);
  if (needs_anchors) {
    if (cfg.anchors_path.empty()) throw Usage("--anchors is required");
    if (!fs::is_regular_file(cfg.anchors_path)) throw Usage("anchors file not found: " + cfg.anchors_path);
  }
  for (const std::string& p : {cfg.out_path, cfg.csv_path}) {
    if (p.empty()) continue;
    const fs::path parent = fs::path(p).parent_path();
    if (!parent.empty() && !fs::is_directory(parent)) throw Usage("output directory does not exist: " + parent.string());
  }
}

void emit(const Config& cfg, const Json& j, std::ostream& out) {
  const std::string text = j.dump(2) + "\n";
  out << text;
  if (!cfg.out_path.empty()) write_file_atomic(cfg.out_path, text);
}

Vec as_vec(const std::vector<double>& v, int dim, const char* what) {
  if (static_cast<int>(v.size()) != dim) {
    throw Usage(std::string(what) + " needs " + std::to_string(dim) + " coordinates, got " + std::to_string(v.size()));
  }
  Vec out = make_vec(v);
  if (!out.allFinite()) throw Usage(std::string(what) + " has non-finite coordinates");
  return out;
}

int cmd_classify(const Config& cfg, std::ostream& out) {
  check_paths(cfg, false);
  const NormSpec n = load_norm(cfg.norm_path);
  ClassifyBudget budget;
  if (cfg.budget) {
    budget.directions = *cfg.budget;
    budget.pairs = *cfg.budget;
  }
  const Classification c = classify_norm(n, budget, resolve_seed(cfg));
  Json j = to_json(c);
  j["norm"] = to_json(n);
  emit(cfg, j, out);
  return c.conflict() ? kConflict : kOk;
}

int cmd_bisector_sample(const Config& cfg, std::ostream& out) {
  check_paths(cfg, false);
  const NormSpec n = load_norm(cfg.norm_path);
  const Vec x = cfg.x.empty() ? Vec(Vec::Zero(n.dim())) : as_vec(cfg.x, n.dim(), "--x");
  const Vec y = cfg.y.empty() ? Vec(Vec::Unit(n.dim(), 0)) : as_vec(cfg.y, n.dim(), "--y");
  if (x == y) throw Usage("--x and --y must differ");
  SlabOptions opts;
  opts.radii = cfg.radii;
  opts.seed = resolve_seed(cfg);
  if (cfg.budget) opts.samples_per_radius = *cfg.budget;
  if (cfg.tol) opts.flat_tol = *cfg.tol;
  const SlabFit fit = slab_fit(Bisector(n, x, y), opts);
  if (!cfg.csv_path.empty()) {
    std::ostringstream csv;
    write_bisector_csv(csv, fit.samples);
    write_file_atomic(cfg.csv_path, csv.str());
  }
  Json j = to_json(fit);
  j["x"] = vec_to_json(x);
  j["y"] = vec_to_json(y);
  j["samples"] = fit.samples.size();
  emit(cfg, j, out);
  return kOk;
}

AnchorSet load_anchor_set(const Config& cfg, const NormSpec& n) {
  std::vector<Vec> pts = load_points(cfg.anchors_path);
  for (const Vec& p : pts)
    if (p.size() != n.dim()) throw Usage("anchors and norm differ in dimension");
  return AnchorSet(std::move(pts));
}

int cmd_resolve_check(const Config& cfg, std::ostream& out) {
  check_paths(cfg, true);
  const NormSpec n = load_norm(cfg.norm_path);
  const AnchorSet a = load_anchor_set(cfg, n);
  ResolveBudget budget;
  if (cfg.budget) budget.probes = *cfg.budget;
  const ResolutionReport r = is_resolving_for_hull(a, n, budget, resolve_seed(cfg));
  emit(cfg, to_json(r), out);
  return r.resolving ? kOk : kNegative;
}

CounterexampleCertificate synthesize(const NormSpec& n, const Config& cfg, std::uint64_t seed) {
  if (n.dim() == 2) return srs2_counterexample(n, cfg.s);
  if (!n.is_strictly_convex()) {
    const StrictConvexityReport probe = strict_convexity_probe(n, 64, seed);
    if (!probe.witness) throw NoSignPattern("no flat segment located on the unit sphere");
    return lift_to_dimension(flat_segment_counterexample(n, *probe.witness, cfg.s), n, seed);
  }
  Srs3Options opts;
  if (cfg.budget) opts.random_directions = *cfg.budget;
  if (n.dim() == 3) return srs3_counterexample(n, opts, seed);
  return lift_to_dimension(srs3_counterexample(n.leading(3), opts, seed), n, seed);
}

int cmd_counterexample(const Config& cfg, std::ostream& out) {
  check_paths(cfg, false);
  const NormSpec n = load_norm(cfg.norm_path);
  if (cfg.s && !(*cfg.s > 0.0)) throw Usage("--s must be positive");
  auto refusal = [&](const char* reason, const std::string& message, int code) {
    emit(cfg, Json{{"refusal", true}, {"reason", reason}, {"message", message}}, out);
    return code;
  };
  try {
    const std::uint64_t seed = resolve_seed(cfg);
    const CounterexampleCertificate cert = synthesize(n, cfg, seed);
    const CertificateCheck check = verify_certificate(cert, n);
    if (!check.passed) return refusal("VerificationFailed", check.failures.front(), kBudgetExhausted);
    emit(cfg, to_json(cert), out);
    return kOk;
  } catch (const NormIsEuclidean& e) {
    return refusal("NormIsEuclidean", e.what(), kNegative);
  } catch (const NormIsStrictlyConvex& e) {
    return refusal("NormIsStrictlyConvex", e.what(), kNegative);
  } catch (const NoSignPattern& e) {
    return refusal("NoSignPattern", e.what(), kBudgetExhausted);
  }
}

int cmd_multilaterate(const Config& cfg, std::ostream& out) {
  check_paths(cfg, true);
  const NormSpec n = load_norm(cfg.norm_path);
  const AnchorSet a = load_anchor_set(cfg, n);
  if (static_cast<int>(cfg.distances.size()) != a.size()) {
    throw Usage("--distances needs " + std::to_string(a.size()) + " values, got " + std::to_string(cfg.distances.size()));
  }
  for (double r : cfg.distances)
    if (!std::isfinite(r) || r < 0.0) throw Usage("--distances must be finite and nonnegative");
  MultilaterateOptions opts;
  opts.grid = cfg.budget.value_or(cfg.grid);
  if (opts.grid < 1) throw Usage("--grid must be positive");
  if (cfg.tol) opts.tol = *cfg.tol;
  try {
    const Multilateration m = multilaterate(a, n, DistanceVector{make_vec(cfg.distances)}, opts);
    Json j = to_json(m);
    const bool unique = m.components.size() == 1 && m.components.front().shape == ComponentShape::point;
    j["status"] = m.components.empty() ? "none" : (unique ? "unique" : "ambiguous");
    emit(cfg, j, out);
    if (m.components.empty()) return kNoSolution;
    return unique ? kOk : kNegative;
  } catch (const InfeasibleDistances& e) {
    emit(cfg, Json{{"status", "infeasible"}, {"message", e.what()}, {"components", Json::array()}}, out);
    return kNoSolution;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bisectors, multilateration and resolving simplices in normed spaces", "minkres"};
  app.require_subcommand(1);
  Config cfg;

  auto add_globals = [&](CLI::App* sub) {
    sub->add_option("--norm", cfg.norm_path, "NormSpec JSON file");
    sub->add_option("--seed", cfg.seed, "random seed (default fixed; MR_SEED overrides the default)");
    sub->add_option("--tol", cfg.tol, "tolerance override");
    sub->add_option("--out", cfg.out_path, "also write the JSON report here");
    sub->add_option("--csv", cfg.csv_path, "write plot-ready CSV here");
    sub->add_option("--budget", cfg.budget, "search budget")->check(CLI::PositiveNumber);
  };

  CLI::App* classify = app.add_subcommand("classify", "classify a norm as euclidean, strictly convex or not");
  add_globals(classify);

  CLI::App* bisector = app.add_subcommand("bisector-sample", "sample B(x, y) and fit the thinnest slab");
  add_globals(bisector);
  bisector->add_option("--x", cfg.x, "first point (comma separated)")->delimiter(',');
  bisector->add_option("--y", cfg.y, "second point (comma separated)")->delimiter(',');
  bisector->add_option("--radii", cfg.radii, "sampling radii in units of ||x - y||")->delimiter(',');

  CLI::App* resolve = app.add_subcommand("resolve-check", "search for two hull points with equal anchor distances");
  add_globals(resolve);
  resolve->add_option("--anchors", cfg.anchors_path, "anchor JSON file");

  CLI::App* counter = app.add_subcommand("counterexample", "synthesize a verified non-resolving configuration");
  add_globals(counter);
  counter->add_option("--s", cfg.s, "scale parameter of the planar construction (default: automatic)");

  CLI::App* multi = app.add_subcommand("multilaterate", "recover hull points from anchor distances");
  add_globals(multi);
  multi->add_option("--anchors", cfg.anchors_path, "anchor JSON file");
  multi->add_option("--distances", cfg.distances, "distances to the anchors (comma separated)")->delimiter(',');
  multi->add_option("--grid", cfg.grid, "barycentric seeding grid");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kMalformed;
  }

  try {
    if (classify->parsed()) return cmd_classify(cfg, out);
    if (bisector->parsed()) return cmd_bisector_sample(cfg, out);
    if (resolve->parsed()) return cmd_resolve_check(cfg, out);
    if (counter->parsed()) return cmd_counterexample(cfg, out);
    if (multi->parsed()) return cmd_multilaterate(cfg, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kMalformed;
  }
  return kMalformed;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace minkres::cli
