#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "minkres/bisector.hpp"
#include "minkres/gauss.hpp"
#include "minkres/resolve.hpp"

namespace minkres {

using Json = nlohmann::json;

class ParseError : public Error {
 public:
  using Error::Error;
};

Json vec_to_json(const Vec& v);
Vec vec_from_json(const Json& j, const char* what);
std::vector<Vec> points_from_json(const Json& j, const char* what);

Json to_json(const NormSpec& n);
/// Accepts the schema {"kind", "dim", "p" (number or "inf"), "Q", "vertices"}.
NormSpec norm_from_json(const Json& j);

Json to_json(const CounterexampleCertificate& c);
CounterexampleCertificate certificate_from_json(const Json& j);

Json to_json(const CertificateCheck& c);
Json to_json(const ResolutionReport& r);
Json to_json(const SlabFit& s);
Json to_json(const GaussFit& g);
Json to_json(const Multilateration& m);
Json to_json(const Classification& c);

/// Bisector samples as "radius,coord_1,...,coord_d,residual".
void write_bisector_csv(std::ostream& os, const std::vector<BisectorSample>& samples);
/// Gauss samples as "v1,v2,v3,g1,g2,g3".
void write_gauss_csv(std::ostream& os, const GaussSample& g);

std::string read_text_file(const std::string& path);
Json read_json_file(const std::string& path);
NormSpec load_norm(const std::string& path);
/// Either a bare array of points or {"anchors": [...]}.
std::vector<Vec> load_points(const std::string& path);

/// Writes through a temporary sibling file and renames it into place.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace minkres
