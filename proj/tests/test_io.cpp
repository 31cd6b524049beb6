#include <filesystem>
#include <sstream>

#include "helpers.hpp"

using namespace minkres;
using testing::check_close;

namespace {

std::filesystem::path temp_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "minkres_io_test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("norm specs round trip") {
  for (const char* f : {"euclid3.json", "ellipsoid3.json", "l1p5_dim2.json", "linf_dim4.json", "hexagon.json"}) {
    CAPTURE(f);
    const NormSpec n = testing::norm_fixture(f);
    const NormSpec back = norm_from_json(Json::parse(to_json(n).dump()));
    CHECK(back.kind() == n.kind());
    CHECK(back.dim() == n.dim());
    Rng rng(1);
    for (int k = 0; k < 20; ++k) {
      const Vec v = random_gaussian(rng, n.dim());
      CHECK(back.value(v) == n.value(v));
    }
  }
  CHECK(to_json(NormSpec::p_norm(2, kInf))["p"] == "inf");
  CHECK(norm_from_json(Json::parse(R"({"kind":"p_norm","dim":3,"p":"infinity"})")).p() == kInf);
}

TEST_CASE("doubles survive a text round trip bit for bit") {
  Rng rng(2);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int k = 0; k < 200; ++k) {
    const Vec v = make_vec({u(rng), 1.0 / 3.0, 1e-300 * u(rng), u(rng) * 1e12});
    const Vec back = vec_from_json(Json::parse(vec_to_json(v).dump()), "v");
    for (Eigen::Index i = 0; i < v.size(); ++i) CHECK(back[i] == v[i]);
  }
}

TEST_CASE("certificates round trip") {
  const CounterexampleCertificate c = srs2_counterexample(NormSpec::p_norm(2, kInf));
  const CounterexampleCertificate back = certificate_from_json(Json::parse(to_json(c).dump(2)));
  check_close(back.x, c.x, 0.0);
  check_close(back.y, c.y, 0.0);
  REQUIRE(back.anchors.size() == c.anchors.size());
  for (std::size_t i = 0; i < c.anchors.size(); ++i) check_close(back.anchors[i], c.anchors[i], 0.0);
  CHECK(back.equidistance_residual == c.equidistance_residual);
  CHECK(back.hull_margin == c.hull_margin);
  CHECK(verify_certificate(back, back.norm).passed);
}

TEST_CASE("malformed norm specs are rejected") {
  for (const char* text : {R"([])", R"({"dim":2})", R"({"kind":"p_norm","dim":2})", R"({"kind":"p_norm","dim":2,"p":"big"})",
                           R"({"kind":"p_norm","dim":1,"p":2})", R"({"kind":"p_norm","dim":2.5,"p":2})",
                           R"({"kind":"p_norm","dim":2,"p":0.5})", R"({"kind":"ellipsoidal","dim":3,"Q":[[1,0],[0,1]]})",
                           R"({"kind":"ellipsoidal","dim":2,"Q":[[1,2],[2,1]]})", R"({"kind":"polyhedral","dim":2,"vertices":[[1,0]]})",
                           R"({"kind":"cube","dim":2})", R"({"kind":"polyhedral","dim":2,"vertices":[[1,0],[0,"a"]]})"}) {
    CAPTURE(text);
    CHECK_THROWS_AS(norm_from_json(Json::parse(text)), ParseError);
  }
}

TEST_CASE("files") {
  const auto dir = temp_dir();
  CHECK_THROWS_AS(load_norm((dir / "missing.json").string()), ParseError);

  const std::string bad = (dir / "bad.json").string();
  write_file_atomic(bad, "{not json");
  CHECK_THROWS_AS(read_json_file(bad), ParseError);

  const std::string target = (dir / "out.json").string();
  write_file_atomic(target, "first");
  write_file_atomic(target, "second");
  CHECK(read_text_file(target) == "second");
  CHECK_FALSE(std::filesystem::exists(target + ".tmp"));
  CHECK_THROWS_AS(write_file_atomic((dir / "no" / "such" / "dir.json").string(), "x"), Error);

  CHECK(load_points(testing::fixture("linf2_ambiguous.json")).size() == 3);
  const std::string bare = (dir / "bare.json").string();
  write_file_atomic(bare, "[[0,0],[1,0],[0,1]]");
  CHECK(load_points(bare).size() == 3);
  write_file_atomic(bare, "[[0,0],[1,0,0]]");
  CHECK_THROWS_AS(load_points(bare), ParseError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("csv writers") {
  const SlabFit fit = slab_fit(Bisector(NormSpec::euclidean(2), Vec::Zero(2), make_vec({1, 0})));
  std::ostringstream os;
  write_bisector_csv(os, fit.samples);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "radius,coord_1,coord_2,residual");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == static_cast<int>(fit.samples.size()));

  std::ostringstream gs;
  write_gauss_csv(gs, sample_gauss_map(NormSpec::euclidean(3), 5, 1));
  CHECK(gs.str().rfind("v1,v2,v3,g1,g2,g3\n", 0) == 0);
}

TEST_CASE("report serialization") {
  const Multilateration m = multilaterate(AnchorSet(load_points(testing::fixture("linf2_ambiguous.json"))), NormSpec::p_norm(2, kInf),
                                          {make_vec({2, 5, 5})});
  const Json j = to_json(m);
  CHECK(j["components"].size() == 1);
  CHECK(j["components"][0]["shape"] == "segment");
  CHECK(j["solutions"].size() == 2);

  const Json c = to_json(classify_norm(NormSpec::euclidean(3)));
  CHECK(c["class"] == "euclidean");
  CHECK(c["conflict"] == false);

  const Json s = to_json(slab_fit(Bisector(NormSpec::euclidean(3), Vec::Zero(3), make_vec({1, 0, 0}))));
  CHECK(s["verdict"] == "sandwiched");
}
