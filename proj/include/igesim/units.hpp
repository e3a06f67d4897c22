#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace igesim {

// Power on the logarithmic scale (decibel-milliwatts).
struct PowerDbm {
  double value = 0.0;
};

// Power on the linear scale (milliwatts), >= 0.
struct LinearMw {
  double value = 0.0;
};

inline LinearMw dbm_to_mw(PowerDbm p) {
  if (!std::isfinite(p.value)) {
    throw std::invalid_argument("dbm_to_mw: input must be finite");
  }
  return LinearMw{std::pow(10.0, p.value / 10.0)};
}

inline PowerDbm mw_to_dbm(LinearMw p) {
  if (!(p.value > 0.0)) {
    throw std::domain_error("mw_to_dbm: power must be > 0 mW");
  }
  return PowerDbm{10.0 * std::log10(p.value)};
}

// Raw-scalar variants for internal math on gain/power arrays.
inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

inline double mw_to_dbm_raw(double mw) {
  return mw > 0.0 ? 10.0 * std::log10(mw)
                  : -std::numeric_limits<double>::infinity();
}

// Channel gains use the same decade algebra as powers.
inline double db_to_linear_gain(double db) { return std::pow(10.0, db / 10.0); }

inline double linear_gain_to_db(double h) { return mw_to_dbm_raw(h); }

}  // namespace igesim
