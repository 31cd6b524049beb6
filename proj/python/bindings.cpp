#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "minkres/io.hpp"

namespace py = pybind11;
using namespace minkres;

namespace {

std::string dump(const Json& j) { return j.dump(); }

CounterexampleCertificate parse_certificate(const std::string& text) {
  const Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ParseError("certificate: invalid JSON");
  return certificate_from_json(j);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bisectors, multilateration and resolving simplices in finite-dimensional normed spaces";

  auto base = py::register_exception<Error>(m, "MinkresError", PyExc_ValueError);
  py::register_exception<DimensionMismatch>(m, "DimensionMismatch", base);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base);
  py::register_exception<InvalidNormSpec>(m, "InvalidNormSpec", base);
  py::register_exception<DegenerateAnchors>(m, "DegenerateAnchors", base);
  py::register_exception<InfeasibleDistances>(m, "InfeasibleDistances", base);
  py::register_exception<NormIsStrictlyConvex>(m, "NormIsStrictlyConvex", base);
  py::register_exception<NormIsEuclidean>(m, "NormIsEuclidean", base);
  py::register_exception<NoSignPattern>(m, "NoSignPattern", base);
  py::register_exception<NotStrictlyConvex>(m, "NotStrictlyConvex", base);
  py::register_exception<ParseError>(m, "ParseError", base);

  py::class_<NormSpec>(m, "NormSpec")
      .def_static("euclidean", &NormSpec::euclidean, py::arg("dim"))
      .def_static("ellipsoidal", &NormSpec::ellipsoidal, py::arg("q"))
      .def_static("p_norm", &NormSpec::p_norm, py::arg("dim"), py::arg("p"))
      .def_static("polyhedral", &NormSpec::polyhedral, py::arg("vertices"))
      .def_static("from_json", [](const std::string& text) {
        const Json j = Json::parse(text, nullptr, false);
        if (j.is_discarded()) throw ParseError("norm: invalid JSON");
        return norm_from_json(j);
      })
      .def_static("load", &load_norm, py::arg("path"))
      .def("to_json", [](const NormSpec& n) { return dump(to_json(n)); })
      .def("__call__", [](const NormSpec& n, const Vec& v) { return eval_norm(n, v); })
      .def_property_readonly("dim", &NormSpec::dim)
      .def_property_readonly("kind", [](const NormSpec& n) { return to_string(n.kind()); })
      .def_property_readonly("is_strictly_convex", &NormSpec::is_strictly_convex)
      .def_property_readonly("is_inner_product", &NormSpec::is_inner_product)
      .def("__repr__", [](const NormSpec& n) { return "NormSpec(" + n.describe() + ")"; });

  m.def("eval_norm", &eval_norm, py::arg("norm"), py::arg("v"));
  m.def("sphere_point", &sphere_point, py::arg("norm"), py::arg("direction"));
  m.def(
      "support_contact",
      [](const NormSpec& n, const Vec& w) {
        const SupportContact c = support_contact(n, w);
        return py::make_tuple(c.point, c.is_exposed_uniquely);
      },
      py::arg("norm"), py::arg("functional"));
  m.def("parallelogram_defect", &parallelogram_defect, py::arg("norm"), py::arg("x"), py::arg("y"));

  m.def(
      "membership",
      [](const NormSpec& n, const Vec& x, const Vec& y, const Vec& z, double tol) {
        const Membership r = membership(Bisector(n, x, y), z, tol);
        return py::make_tuple(r.member, r.residual);
      },
      py::arg("norm"), py::arg("x"), py::arg("y"), py::arg("z"), py::arg("tol") = kDefaultTol);
  m.def(
      "line_intersect",
      [](const NormSpec& n, const Vec& x, const Vec& y, const Vec& anchor) { return line_intersect(Bisector(n, x, y), anchor); },
      py::arg("norm"), py::arg("x"), py::arg("y"), py::arg("anchor"));
  m.def(
      "slab_fit",
      [](const NormSpec& n, const Vec& x, const Vec& y, std::vector<double> radii, int samples_per_radius, std::uint64_t seed) {
        SlabOptions opts;
        if (!radii.empty()) opts.radii = std::move(radii);
        if (samples_per_radius > 0) opts.samples_per_radius = samples_per_radius;
        opts.seed = seed;
        return dump(to_json(slab_fit(Bisector(n, x, y), opts)));
      },
      py::arg("norm"), py::arg("x"), py::arg("y"), py::arg("radii") = std::vector<double>{}, py::arg("samples_per_radius") = 0,
      py::arg("seed") = 0);

  m.def(
      "multilaterate",
      [](const std::vector<Vec>& anchors, const NormSpec& n, const Vec& r, int grid, double tol) {
        MultilaterateOptions opts;
        opts.grid = grid;
        opts.tol = tol;
        return dump(to_json(multilaterate(AnchorSet(anchors), n, DistanceVector{r}, opts)));
      },
      py::arg("anchors"), py::arg("norm"), py::arg("distances"), py::arg("grid") = MultilaterateOptions{}.grid,
      py::arg("tol") = kDefaultTol);
  m.def(
      "distances_from",
      [](const std::vector<Vec>& anchors, const NormSpec& n, const Vec& x) { return distances_from(AnchorSet(anchors), n, x).values; },
      py::arg("anchors"), py::arg("norm"), py::arg("x"));
  m.def(
      "is_resolving_for_hull",
      [](const std::vector<Vec>& anchors, const NormSpec& n, std::uint64_t seed) {
        return dump(to_json(is_resolving_for_hull(AnchorSet(anchors), n, {}, seed)));
      },
      py::arg("anchors"), py::arg("norm"), py::arg("seed") = 0);

  m.def(
      "srs2_counterexample",
      [](const NormSpec& n, std::optional<double> s) { return dump(to_json(srs2_counterexample(n, s))); }, py::arg("norm"),
      py::arg("s") = py::none());
  m.def(
      "srs3_counterexample", [](const NormSpec& n, std::uint64_t seed) { return dump(to_json(srs3_counterexample(n, {}, seed))); },
      py::arg("norm"), py::arg("seed") = 0);
  m.def(
      "lift_to_dimension",
      [](const std::string& cert, const NormSpec& n, std::uint64_t seed) {
        return dump(to_json(lift_to_dimension(parse_certificate(cert), n, seed)));
      },
      py::arg("certificate"), py::arg("norm"), py::arg("seed") = 0);
  m.def(
      "verify_certificate",
      [](const std::string& cert) {
        const CounterexampleCertificate c = parse_certificate(cert);
        return dump(to_json(verify_certificate(c, c.norm)));
      },
      py::arg("certificate"));

  m.def(
      "classify_norm", [](const NormSpec& n, std::uint64_t seed) { return dump(to_json(classify_norm(n, {}, seed))); },
      py::arg("norm"), py::arg("seed") = 0);
  m.def(
      "fit_gauss_map", [](const NormSpec& n, int count, std::uint64_t seed) { return dump(to_json(fit_gauss_map(n, count, seed))); },
      py::arg("norm"), py::arg("count") = 64, py::arg("seed") = 0);
  m.def("line_preservation_test", &line_preservation_test, py::arg("norm"), py::arg("trials") = 64, py::arg("seed") = 0);
}
