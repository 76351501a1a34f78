// Explicit building scenes against independent line-of-sight thinning.

#include "doctest.h"
#include "hapris/validation.hpp"

using namespace hapris;

TEST_CASE("explicit and independent visibility agree in the reference scenario") {
  const auto r = validation::check_visibility_modes(analytic::urban_defaults(50), 100000, 1);
  MESSAGE(r.detail);
  CHECK(r.passed);
}
