#pragma once

#include <string>

#include "doctest.h"
#include "minkres/io.hpp"

namespace testing {

inline std::string fixture(const std::string& name) { return std::string(MINKRES_FIXTURES) + "/" + name; }

inline minkres::NormSpec norm_fixture(const std::string& name) { return minkres::load_norm(fixture(name)); }

inline void check_close(const minkres::Vec& a, const minkres::Vec& b, double tol) {
  REQUIRE(a.size() == b.size());
  CHECK((a - b).cwiseAbs().maxCoeff() <= tol);
}

}  // namespace testing
