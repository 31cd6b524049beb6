#include "minkres/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace minkres {

namespace {

Json mat_to_json(const Mat& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vec_to_json(m.row(i).transpose()));
  return rows;
}

Json optional_vec(const std::optional<Vec>& v) { return v ? vec_to_json(*v) : Json(nullptr); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

std::string format_number(double v) {
  return Json(v).dump();
}

}  // namespace

Json vec_to_json(const Vec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Vec vec_from_json(const Json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw ParseError(std::string(what) + ": expected a non-empty array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ParseError(std::string(what) + ": expected numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  if (!v.allFinite()) throw ParseError(std::string(what) + ": non-finite coordinate");
  return v;
}

std::vector<Vec> points_from_json(const Json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + ": expected an array of points");
  std::vector<Vec> out;
  for (const Json& p : j) out.push_back(vec_from_json(p, what));
  for (const Vec& p : out)
    if (p.size() != out.front().size()) throw ParseError(std::string(what) + ": points differ in dimension");
  return out;
}

Json to_json(const NormSpec& n) {
  Json j;
  j["kind"] = to_string(n.kind());
  j["dim"] = n.dim();
  switch (n.kind()) {
    case NormKind::euclidean:
      break;
    case NormKind::ellipsoidal:
      j["Q"] = mat_to_json(n.q());
      break;
    case NormKind::p_norm:
      j["p"] = std::isinf(n.p()) ? Json("inf") : Json(n.p());
      break;
    case NormKind::polyhedral:
      j["vertices"] = mat_to_json(n.vertices().transpose());
      break;
  }
  return j;
}

NormSpec norm_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("norm: expected an object");
  const Json& kind = field(j, "kind");
  if (!kind.is_string()) throw ParseError("norm: \"kind\" must be a string");
  const std::string k = kind.get<std::string>();
  const Json& dim_field = field(j, "dim");
  if (!dim_field.is_number_integer() || dim_field.get<int>() < 2) throw ParseError("norm: \"dim\" must be an integer >= 2");
  const int dim = dim_field.get<int>();

  auto check_dim = [&](const NormSpec& n) {
    if (n.dim() != dim) throw ParseError("norm: \"dim\" disagrees with the data");
    return n;
  };
  try {
    if (k == "euclidean") return NormSpec::euclidean(dim);
    if (k == "p_norm") {
      const Json& p = field(j, "p");
      if (p.is_string()) {
        const std::string s = p.get<std::string>();
        if (s != "inf" && s != "infinity") throw ParseError("norm: \"p\" must be a number or \"inf\"");
        return NormSpec::p_norm(dim, kInf);
      }
      if (!p.is_number()) throw ParseError("norm: \"p\" must be a number or \"inf\"");
      return NormSpec::p_norm(dim, p.get<double>());
    }
    if (k == "ellipsoidal") {
      const std::vector<Vec> rows = points_from_json(field(j, "Q"), "Q");
      Mat q(static_cast<Eigen::Index>(rows.size()), rows.empty() ? 0 : rows.front().size());
      for (std::size_t i = 0; i < rows.size(); ++i) q.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
      return check_dim(NormSpec::ellipsoidal(q));
    }
    if (k == "polyhedral") return check_dim(NormSpec::polyhedral(points_from_json(field(j, "vertices"), "vertices")));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(std::string("norm: ") + e.what());
  }
  throw ParseError("norm: unknown kind \"" + k + "\"");
}

Json to_json(const CounterexampleCertificate& c) {
  Json anchors = Json::array();
  for (const Vec& p : c.anchors) anchors.push_back(vec_to_json(p));
  return Json{{"x", vec_to_json(c.x)},
              {"y", vec_to_json(c.y)},
              {"anchors", anchors},
              {"equidistance_residual", c.equidistance_residual},
              {"hull_margin", c.hull_margin},
              {"norm", to_json(c.norm)}};
}

CounterexampleCertificate certificate_from_json(const Json& j) {
  CounterexampleCertificate c{norm_from_json(field(j, "norm")), vec_from_json(field(j, "x"), "x"),
                              vec_from_json(field(j, "y"), "y"), points_from_json(field(j, "anchors"), "anchors"), 0.0, 0.0};
  if (j.contains("equidistance_residual") && j["equidistance_residual"].is_number())
    c.equidistance_residual = j["equidistance_residual"].get<double>();
  if (j.contains("hull_margin") && j["hull_margin"].is_number()) c.hull_margin = j["hull_margin"].get<double>();
  return c;
}

Json to_json(const CertificateCheck& c) {
  return Json{{"passed", c.passed},
              {"smallest_singular_value", c.smallest_singular_value},
              {"affine_independent", c.affine_independent},
              {"residuals", c.residuals},
              {"equidistance_residual", c.equidistance_residual},
              {"bary_x", optional_vec(c.bary_x)},
              {"bary_y", optional_vec(c.bary_y)},
              {"hull_margin", c.hull_margin},
              {"separation", c.separation},
              {"failures", c.failures}};
}

Json to_json(const ResolutionReport& r) {
  Json j{{"resolving", r.resolving}, {"residual", r.residual}, {"method", r.method}};
  j["witness"] = r.witness ? Json::array({vec_to_json(r.witness->first), vec_to_json(r.witness->second)}) : Json(nullptr);
  return j;
}

Json to_json(const SlabFit& s) {
  return Json{{"normal", vec_to_json(s.normal)},
              {"lo", s.lo},
              {"hi", s.hi},
              {"max_violation", s.max_violation},
              {"sample_radius", s.sample_radius},
              {"radii", s.radii},
              {"widths_by_radius", s.widths_by_radius},
              {"noise_by_radius", s.noise_by_radius},
              {"growth", s.growth},
              {"verdict", to_string(s.verdict)}};
}

Json to_json(const GaussFit& g) {
  return Json{{"A", mat_to_json(g.a)}, {"residual", g.residual}, {"definiteness", to_string(g.definiteness)}};
}

Json to_json(const Multilateration& m) {
  Json comps = Json::array();
  for (const SolutionComponent& c : m.components) {
    Json verts = Json::array();
    for (const Vec& v : c.vertices) verts.push_back(vec_to_json(v));
    comps.push_back(Json{{"shape", to_string(c.shape)}, {"vertices", verts}, {"residual", c.residual}});
  }
  Json sols = Json::array();
  for (const Vec& p : m.points()) sols.push_back(vec_to_json(p));
  Json j{{"components", comps}, {"solutions", sols}, {"best_residual", m.best_residual}};
  if (m.linear_solution) {
    j["linear_solution"] = vec_to_json(*m.linear_solution);
    j["crosscheck_agrees"] = m.crosscheck_agrees;
  }
  return j;
}

Json to_json(const Classification& c) {
  const ClassifyEvidence& ev = c.evidence;
  Json evidence{{"strictly_convex", ev.strictly_convex},
                {"sampled_flat_chords", ev.sampled_flat_chords},
                {"sampled_chords", ev.sampled_chords},
                {"max_parallelogram_defect", ev.max_parallelogram_defect},
                {"parallelogram_zero", ev.parallelogram_zero},
                {"conflicts", ev.conflicts}};
  if (ev.flat_witness) {
    evidence["flat_witness"] = Json{{"a", vec_to_json(ev.flat_witness->a)},
                                    {"b", vec_to_json(ev.flat_witness->b)},
                                    {"lambda_ratio", ev.flat_witness->lambda_ratio}};
  }
  if (ev.gauss) evidence["gauss_fit"] = to_json(*ev.gauss);
  if (ev.line_defect) evidence["line_preservation_defect"] = *ev.line_defect;
  if (!ev.reflections.empty()) {
    Json refl = Json::array();
    for (const ReflectionReport& r : ev.reflections) {
      refl.push_back(Json{{"bisector_is_line", r.bisector_is_line},
                          {"isometry_residual", r.isometry_residual},
                          {"collinearity_defect", r.collinearity_defect}});
    }
    evidence["reflections"] = refl;
  }
  return Json{{"class", to_string(c.cls)}, {"conflict", c.conflict()}, {"evidence", evidence}};
}

void write_bisector_csv(std::ostream& os, const std::vector<BisectorSample>& samples) {
  const Eigen::Index d = samples.empty() ? 0 : samples.front().point.size();
  os << "radius";
  for (Eigen::Index i = 1; i <= d; ++i) os << ",coord_" << i;
  os << ",residual\n";
  for (const BisectorSample& s : samples) {
    os << format_number(s.radius);
    for (Eigen::Index i = 0; i < s.point.size(); ++i) os << ',' << format_number(s.point[i]);
    os << ',' << format_number(s.residual) << '\n';
  }
}

void write_gauss_csv(std::ostream& os, const GaussSample& g) {
  os << "v1,v2,v3,g1,g2,g3\n";
  for (std::size_t i = 0; i < g.inputs.size(); ++i) {
    const Vec& v = g.inputs[i].rep();
    const Vec& w = g.outputs[i].rep();
    os << format_number(v[0]) << ',' << format_number(v[1]) << ',' << format_number(v[2]) << ',' << format_number(w[0])
       << ',' << format_number(w[1]) << ',' << format_number(w[2]) << '\n';
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json_file(const std::string& path) {
  const std::string text = read_text_file(path);
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ParseError(path + ": invalid JSON");
  return j;
}

NormSpec load_norm(const std::string& path) { return norm_from_json(read_json_file(path)); }

std::vector<Vec> load_points(const std::string& path) {
  const Json j = read_json_file(path);
  if (j.is_object()) return points_from_json(field(j, "anchors"), "anchors");
  return points_from_json(j, "anchors");
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cannot move " + tmp.string() + " into place: " + ec.message());
  }
}

}  // namespace minkres
