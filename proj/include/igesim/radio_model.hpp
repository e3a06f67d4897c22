#pragma once

#include <map>
#include <span>
#include <vector>

#include "igesim/rng.hpp"
#include "igesim/units.hpp"

namespace igesim {

// Additivity-distortion lookup: the ratio of the actual received power to the
// sum of the individually attenuated sender powers, as a function of the two
// strongest per-sender received powers in dBm. Bilinear between bin centers,
// clamped at the grid edges, symmetric in its two arguments.
class AdditivityTable {
 public:
  // Ideal table: rho == 1 everywhere.
  AdditivityTable();
  AdditivityTable(std::vector<double> bin_centers_dbm,
                  std::vector<double> rho_row_major);

  double rho(double rx1_dbm, double rx2_dbm) const;

  bool is_ideal() const { return ideal_; }
  const std::vector<double>& bins_dbm() const { return bins_; }
  double at(int i, int j) const { return rho_[static_cast<std::size_t>(i) * bins_.size() + j]; }

 private:
  bool ideal_ = true;
  std::vector<double> bins_;
  std::vector<double> rho_;
};

// Conditionally-linear radio front end: proportional and additive inside the
// linear region, with configurable distortion outside it.
struct RadioModel {
  double tx_linear_max_dbm = 0.0;
  double rx_linear_min_dbm = -90.0;
  double rx_linear_max_dbm = -20.0;
  double noise_floor_dbm = -100.0;  // -inf disables the floor entirely
  double rssi_resolution_db = 1.0;  // 0 disables quantization
  double rssi_noise_sigma_db = 0.5;
  // Transmit level (dBm) -> extra radiated dB for levels above tx_linear_max.
  std::map<double, double> tx_distortion_db;
  AdditivityTable additivity;

  double noise_floor_mw() const;
  // Effective radiated power after per-level transmit distortion.
  double effective_tx_dbm(double level_dbm) const;
  void validate() const;

  // Exact physics: no noise, no quantization, no floor, no clamping, rho == 1.
  static RadioModel ideal();
  // Defaults shaped after the measured behavior of a low-power 2.4 GHz SoC:
  // non-unit additivity at strong and near-floor received powers, plus a
  // fixed offset for transmit levels above 0 dBm.
  static RadioModel calibrated();
};

// Sum of individually attenuated transmit powers plus the noise floor.
LinearMw ideal_received_mw(std::span<const double> gains_linear,
                           std::span<const double> tx_mw,
                           const RadioModel& model);

// Same, but through the distortion model: transmit offsets above the linear
// region, then the additivity ratio evaluated at the two strongest per-sender
// contributions (rho = 1 with fewer than two contributors).
LinearMw distorted_received_mw(std::span<const double> gains_linear,
                               std::span<const double> tx_dbm,
                               const RadioModel& model);

// One reported RSSI value: clamp/compress to the device operating range, add
// Gaussian reporting noise, quantize to the RSSI resolution.
PowerDbm report_rssi(LinearMw true_rx, const RadioModel& model, Rng& rng);

double power_ratio(LinearMw actual, LinearMw expected_sum);

}  // namespace igesim
