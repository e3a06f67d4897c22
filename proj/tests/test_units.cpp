#include "doctest.h"

#include <cmath>

#include "igesim/units.hpp"

using namespace igesim;

TEST_CASE("dbm to mw definition points") {
  CHECK(dbm_to_mw(PowerDbm{0.0}).value == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(dbm_to_mw(PowerDbm{-30.0}).value == doctest::Approx(0.001).epsilon(1e-15));

  // 2 mW sits at 10*log10(2) dBm; the rounded form must land within 1e-6.
  const double two_mw_dbm = 10.0 * std::log10(2.0);
  CHECK(dbm_to_mw(PowerDbm{two_mw_dbm}).value == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(dbm_to_mw(PowerDbm{3.0103}).value == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("mw to dbm definition points") {
  CHECK(mw_to_dbm(LinearMw{1.0}).value == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(mw_to_dbm(LinearMw{0.003}).value == doctest::Approx(-25.2288).epsilon(1e-4));
  CHECK(mw_to_dbm(LinearMw{0.003}).value ==
        doctest::Approx(10.0 * std::log10(0.003)).epsilon(1e-15));
}

TEST_CASE("round trip over the linear-region range") {
  for (double x = -90.0; x <= 0.0; x += 1.0) {
    const double rt = mw_to_dbm(dbm_to_mw(PowerDbm{x})).value;
    CHECK(std::abs(rt - x) <= 1e-12 * std::max(1.0, std::abs(x)));
  }
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(mw_to_dbm(LinearMw{0.0}), std::domain_error);
  CHECK_THROWS_AS(mw_to_dbm(LinearMw{-1.0}), std::domain_error);
  CHECK_THROWS_AS(dbm_to_mw(PowerDbm{std::nan("")}), std::invalid_argument);
  CHECK_THROWS_AS(dbm_to_mw(PowerDbm{INFINITY}), std::invalid_argument);
}
