#include "igesim/radio_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "igesim/errors.hpp"

namespace igesim {

AdditivityTable::AdditivityTable() : bins_{0.0}, rho_{1.0} {}

AdditivityTable::AdditivityTable(std::vector<double> bin_centers_dbm,
                                 std::vector<double> rho_row_major)
    : ideal_(false), bins_(std::move(bin_centers_dbm)), rho_(std::move(rho_row_major)) {
  if (bins_.empty()) throw ConfigError("additivity table needs bins");
  if (rho_.size() != bins_.size() * bins_.size()) {
    throw ConfigError("additivity table: rho must be bins x bins");
  }
  for (std::size_t i = 1; i < bins_.size(); ++i) {
    if (!(bins_[i] > bins_[i - 1])) {
      throw ConfigError("additivity table: bin centers must be ascending");
    }
  }
  for (double r : rho_) {
    if (!(r > 0.0)) throw ConfigError("additivity table: rho entries must be > 0");
  }
  ideal_ = std::all_of(rho_.begin(), rho_.end(), [](double r) { return r == 1.0; });
}

double AdditivityTable::rho(double rx1_dbm, double rx2_dbm) const {
  if (bins_.size() == 1) return rho_[0];
  const double lo = bins_.front();
  const double hi = bins_.back();
  const double x = std::clamp(rx1_dbm, lo, hi);
  const double y = std::clamp(rx2_dbm, lo, hi);

  auto cell = [&](double v) {
    auto it = std::upper_bound(bins_.begin(), bins_.end(), v);
    std::size_t i = static_cast<std::size_t>(it - bins_.begin());
    if (i == 0) i = 1;
    if (i >= bins_.size()) i = bins_.size() - 1;
    return i - 1;  // v lies in [bins_[i-1], bins_[i]]
  };
  const std::size_t i = cell(x);
  const std::size_t j = cell(y);
  const double tx = (x - bins_[i]) / (bins_[i + 1] - bins_[i]);
  const double ty = (y - bins_[j]) / (bins_[j + 1] - bins_[j]);
  const std::size_t n = bins_.size();
  const double r00 = rho_[i * n + j];
  const double r10 = rho_[(i + 1) * n + j];
  const double r01 = rho_[i * n + j + 1];
  const double r11 = rho_[(i + 1) * n + j + 1];
  return (1.0 - tx) * (1.0 - ty) * r00 + tx * (1.0 - ty) * r10 +
         (1.0 - tx) * ty * r01 + tx * ty * r11;
}

double RadioModel::noise_floor_mw() const {
  if (std::isinf(noise_floor_dbm) && noise_floor_dbm < 0.0) return 0.0;
  return dbm_to_mw(noise_floor_dbm);
}

double RadioModel::effective_tx_dbm(double level_dbm) const {
  if (level_dbm <= tx_linear_max_dbm || tx_distortion_db.empty()) {
    return level_dbm;
  }
  // Exact-level lookup with a small tolerance; unknown levels radiate as set.
  auto it = tx_distortion_db.lower_bound(level_dbm - 1e-6);
  if (it != tx_distortion_db.end() && std::abs(it->first - level_dbm) <= 1e-6) {
    return level_dbm + it->second;
  }
  return level_dbm;
}

void RadioModel::validate() const {
  if (!(rx_linear_min_dbm < rx_linear_max_dbm)) {
    throw ConfigError("radio model: rx_linear_min must be < rx_linear_max");
  }
  if (rssi_resolution_db < 0.0) {
    throw ConfigError("radio model: rssi_resolution must be >= 0");
  }
  if (rssi_noise_sigma_db < 0.0) {
    throw ConfigError("radio model: rssi_noise_sigma must be >= 0");
  }
}

RadioModel RadioModel::ideal() {
  RadioModel m;
  m.rx_linear_min_dbm = -300.0;
  m.rx_linear_max_dbm = 300.0;
  m.noise_floor_dbm = -std::numeric_limits<double>::infinity();
  m.rssi_resolution_db = 0.0;
  m.rssi_noise_sigma_db = 0.0;
  m.tx_distortion_db.clear();
  m.additivity = AdditivityTable();
  return m;
}

RadioModel RadioModel::calibrated() {
  RadioModel m;  // linear-region bounds, floor, and RSSI defaults as declared

  // 4 dB bins spanning the operating range. rho == 1 except two measured
  // features: a decline along the strong-power diagonal (down to 0.71 when
  // both senders arrive near -22 dBm) and a shallow dip around (-68, -68).
  std::vector<double> bins;
  for (double c = -78.0; c <= -22.0 + 1e-9; c += 4.0) bins.push_back(c);
  const std::size_t n = bins.size();
  std::vector<double> rho(n * n, 1.0);
  auto bin_index = [&](double center) {
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(bins[i] - center) < 1e-9) return i;
    }
    throw ConfigError("calibrated table: bad bin center");
  };
  auto set = [&](double a, double b, double r) {
    const std::size_t i = bin_index(a);
    const std::size_t j = bin_index(b);
    rho[i * n + j] = r;
    rho[j * n + i] = r;
  };

  // Strong received powers (-40..-20 dBm).
  set(-38, -38, 1.11);
  set(-38, -34, 1.07);
  set(-38, -30, 1.03);
  set(-38, -26, 1.01);
  set(-34, -34, 1.06);
  set(-34, -30, 0.98);
  set(-30, -30, 0.98);
  set(-30, -26, 0.96);
  set(-30, -22, 0.99);
  set(-26, -26, 0.95);
  set(-26, -22, 0.90);
  set(-22, -22, 0.71);

  // Weak received powers: additivity holds except near (-68, -68).
  set(-70, -70, 0.90);
  set(-70, -66, 0.86);
  set(-66, -66, 0.90);

  m.additivity = AdditivityTable(std::move(bins), std::move(rho));

  // Levels above 0 dBm radiate hot by a fixed offset.
  for (double level : {1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0}) {
    m.tx_distortion_db[level] = 1.5;
  }
  return m;
}

LinearMw ideal_received_mw(std::span<const double> gains_linear,
                           std::span<const double> tx_mw,
                           const RadioModel& model) {
  if (gains_linear.size() != tx_mw.size()) {
    throw std::invalid_argument("ideal_received_mw: gains and powers differ in length");
  }
  double sum = 0.0;
  for (std::size_t z = 0; z < gains_linear.size(); ++z) {
    if (gains_linear[z] < 0.0 || tx_mw[z] < 0.0) {
      throw std::invalid_argument("ideal_received_mw: negative input");
    }
    sum += gains_linear[z] * tx_mw[z];
  }
  return LinearMw{sum + model.noise_floor_mw()};
}

LinearMw distorted_received_mw(std::span<const double> gains_linear,
                               std::span<const double> tx_dbm,
                               const RadioModel& model) {
  if (gains_linear.size() != tx_dbm.size()) {
    throw std::invalid_argument("distorted_received_mw: gains and powers differ in length");
  }
  double sum = 0.0;
  double top1 = 0.0, top2 = 0.0;  // two strongest per-sender contributions, mW
  int contributors = 0;
  for (std::size_t z = 0; z < gains_linear.size(); ++z) {
    if (gains_linear[z] <= 0.0) continue;
    const double mw = gains_linear[z] * dbm_to_mw(model.effective_tx_dbm(tx_dbm[z]));
    if (mw <= 0.0) continue;
    ++contributors;
    sum += mw;
    if (mw > top1) {
      top2 = top1;
      top1 = mw;
    } else if (mw > top2) {
      top2 = mw;
    }
  }
  double rho = 1.0;
  if (contributors >= 2) {
    rho = model.additivity.rho(mw_to_dbm_raw(top1), mw_to_dbm_raw(top2));
  }
  return LinearMw{rho * sum + model.noise_floor_mw()};
}

PowerDbm report_rssi(LinearMw true_rx, const RadioModel& model, Rng& rng) {
  if (true_rx.value < 0.0) {
    throw std::invalid_argument("report_rssi: negative power");
  }
  double dbm = mw_to_dbm_raw(true_rx.value);  // -inf for silence

  // Device response: saturate above the range, soft-compress below it.
  if (dbm > model.rx_linear_max_dbm) {
    dbm = model.rx_linear_max_dbm;
  } else if (dbm < model.rx_linear_min_dbm) {
    dbm = model.rx_linear_min_dbm + 0.5 * (dbm - model.rx_linear_min_dbm);
    dbm = std::max(dbm, model.rx_linear_min_dbm - 10.0);
  }

  if (model.rssi_noise_sigma_db > 0.0) {
    dbm += rng.normal(model.rssi_noise_sigma_db);
  }
  if (model.rssi_resolution_db > 0.0) {
    dbm = std::round(dbm / model.rssi_resolution_db) * model.rssi_resolution_db;
  }
  return PowerDbm{dbm};
}

double power_ratio(LinearMw actual, LinearMw expected_sum) {
  if (!(expected_sum.value > 0.0)) {
    throw std::domain_error("power_ratio: expected sum must be > 0");
  }
  return actual.value / expected_sum.value;
}

}  // namespace igesim
