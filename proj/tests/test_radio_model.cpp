#include "doctest.h"

#include <cmath>
#include <vector>

#include "igesim/radio_model.hpp"
#include "igesim/rng.hpp"
#include "igesim/scenario.hpp"
#include "igesim/stats.hpp"

using namespace igesim;

namespace {

// Noise-free calibrated variant for exact checks on the distortion path.
RadioModel quiet_calibrated() {
  RadioModel m = RadioModel::calibrated();
  m.rssi_noise_sigma_db = 0.0;
  m.rssi_resolution_db = 0.0;
  return m;
}

}  // namespace

TEST_CASE("ideal superposition sums attenuated powers") {
  const RadioModel ideal = RadioModel::ideal();  // no noise floor

  SUBCASE("two equal gains, 1 mW and 2 mW senders") {
    const std::vector<double> gains = {0.001, 0.001};
    const std::vector<double> tx = {1.0, 2.0};
    CHECK(ideal_received_mw(gains, tx, ideal).value ==
          doctest::Approx(0.003).epsilon(1e-12));
  }
  SUBCASE("single sender is plain proportionality") {
    const std::vector<double> gains = {0.0004};
    const std::vector<double> tx = {1.7};
    CHECK(ideal_received_mw(gains, tx, ideal).value ==
          doctest::Approx(0.0004 * 1.7).epsilon(1e-12));
  }
  SUBCASE("no coupling leaves only the noise floor") {
    RadioModel floored = RadioModel::ideal();
    floored.noise_floor_dbm = -100.0;
    const std::vector<double> gains = {0.0, 0.0, 0.0};
    const std::vector<double> tx = {1.0, 1.0, 1.0};
    CHECK(ideal_received_mw(gains, tx, floored).value ==
          doctest::Approx(dbm_to_mw(-100.0)).epsilon(1e-12));
  }
  SUBCASE("length mismatch rejected") {
    const std::vector<double> gains = {0.1, 0.2};
    const std::vector<double> tx = {1.0};
    CHECK_THROWS_AS(ideal_received_mw(gains, tx, ideal), std::invalid_argument);
  }
}

TEST_CASE("distorted superposition degenerates to ideal with rho == 1") {
  RadioModel plain = RadioModel::ideal();
  plain.noise_floor_dbm = -100.0;
  Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform_index(5));
    std::vector<double> gains, tx_dbm, tx_mw;
    for (int i = 0; i < n; ++i) {
      gains.push_back(db_to_linear_gain(rng.uniform(-80.0, -30.0)));
      const double dbm = rng.uniform(-20.0, 0.0);
      tx_dbm.push_back(dbm);
      tx_mw.push_back(dbm_to_mw(dbm));
    }
    const double a = distorted_received_mw(gains, tx_dbm, plain).value;
    const double b = ideal_received_mw(gains, tx_mw, plain).value;
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
  }
}

TEST_CASE("calibrated additivity features") {
  const RadioModel m = quiet_calibrated();
  // Two senders whose contributions arrive at the given dBm levels.
  auto ratio_at = [&](double rx1_dbm, double rx2_dbm) {
    const std::vector<double> gains = {dbm_to_mw(rx1_dbm), dbm_to_mw(rx2_dbm)};
    const std::vector<double> tx = {0.0, 0.0};
    const double actual = distorted_received_mw(gains, tx, m).value - m.noise_floor_mw();
    return power_ratio(LinearMw{actual}, LinearMw{gains[0] + gains[1]});
  };

  CHECK(ratio_at(-22.0, -22.0) == doctest::Approx(0.71).epsilon(1e-9));
  CHECK(ratio_at(-32.0, -32.0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(ratio_at(-38.0, -38.0) == doctest::Approx(1.11).epsilon(1e-9));
  // Large power deltas approach additivity.
  CHECK(ratio_at(-25.0, -75.0) == doctest::Approx(1.0).epsilon(1e-6));
  // Symmetry of the pairwise lookup.
  CHECK(ratio_at(-27.0, -33.0) == doctest::Approx(ratio_at(-33.0, -27.0)).epsilon(1e-12));
}

TEST_CASE("additivity rho applies to the full sum, keyed by the two strongest") {
  RadioModel m = quiet_calibrated();
  // Third weak sender must not change the rho cell chosen by the top two.
  const std::vector<double> g2 = {dbm_to_mw(-22.0), dbm_to_mw(-22.0)};
  const std::vector<double> g3 = {dbm_to_mw(-22.0), dbm_to_mw(-22.0), dbm_to_mw(-75.0)};
  const std::vector<double> tx2 = {0.0, 0.0};
  const std::vector<double> tx3 = {0.0, 0.0, 0.0};
  const double floor = m.noise_floor_mw();
  const double r2 = distorted_received_mw(g2, tx2, m).value - floor;
  const double r3 = distorted_received_mw(g3, tx3, m).value - floor;
  CHECK(r3 == doctest::Approx(0.71 * (g3[0] + g3[1] + g3[2])).epsilon(1e-9));
  CHECK(r3 > r2);
}

TEST_CASE("transmit distortion above the linear region") {
  const RadioModel m = quiet_calibrated();
  CHECK(m.effective_tx_dbm(4.0) == doctest::Approx(5.5));
  CHECK(m.effective_tx_dbm(0.0) == doctest::Approx(0.0));
  CHECK(m.effective_tx_dbm(-8.0) == doctest::Approx(-8.0));

  const std::vector<double> gains = {db_to_linear_gain(-40.0)};
  const std::vector<double> hot = {4.0};
  const double rx = distorted_received_mw(gains, hot, m).value - m.noise_floor_mw();
  CHECK(mw_to_dbm_raw(rx) == doctest::Approx(-40.0 + 4.0 + 1.5).epsilon(1e-9));
}

TEST_CASE("monotone in each transmit power under a constant rho") {
  AdditivityTable flat({-80.0, -20.0}, {0.8, 0.8, 0.8, 0.8});
  RadioModel m = RadioModel::ideal();
  m.additivity = flat;
  Rng rng(7);
  const std::vector<double> gains = {0.001, 0.0004, 0.00007};
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> tx = {rng.uniform(-30, 0), rng.uniform(-30, 0), rng.uniform(-30, 0)};
    const double before = distorted_received_mw(gains, tx, m).value;
    const std::size_t k = rng.uniform_index(3);
    tx[k] += rng.uniform(0.0, 6.0);
    const double after = distorted_received_mw(gains, tx, m).value;
    CHECK(after >= before - 1e-15);
  }
}

TEST_CASE("ideal-model additivity over sender partitions") {
  RadioModel m = RadioModel::ideal();
  m.noise_floor_dbm = -100.0;
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> gains, tx;
    for (int i = 0; i < 6; ++i) {
      gains.push_back(db_to_linear_gain(rng.uniform(-80, -30)));
      tx.push_back(dbm_to_mw(rng.uniform(-20, 0)));
    }
    const double whole = ideal_received_mw(gains, tx, m).value;
    const std::size_t cut = 1 + rng.uniform_index(5);
    const double left = ideal_received_mw(
        std::span(gains).subspan(0, cut), std::span(tx).subspan(0, cut), m).value;
    const double right = ideal_received_mw(
        std::span(gains).subspan(cut), std::span(tx).subspan(cut), m).value;
    // One duplicated noise-floor term across the two partial sums.
    CHECK(whole == doctest::Approx(left + right - m.noise_floor_mw()).epsilon(1e-12));
  }
}

TEST_CASE("rssi reporting") {
  SUBCASE("noise-free unquantized reading is exact inside the range") {
    RadioModel m = quiet_calibrated();
    Rng rng(3);
    const double rx_dbm = -47.3;
    const double reported = report_rssi(LinearMw{dbm_to_mw(rx_dbm)}, m, rng).value;
    CHECK(reported == doctest::Approx(rx_dbm).epsilon(1e-12));
  }
  SUBCASE("below the range the response compresses but stays above -100") {
    RadioModel m = quiet_calibrated();
    Rng rng(3);
    const double reported = report_rssi(LinearMw{dbm_to_mw(-95.0)}, m, rng).value;
    CHECK(reported > -100.0);
    CHECK(reported != doctest::Approx(-95.0).epsilon(1e-6));
    CHECK(reported == doctest::Approx(-92.5).epsilon(1e-12));
  }
  SUBCASE("saturates at the top of the range") {
    RadioModel m = quiet_calibrated();
    Rng rng(3);
    CHECK(report_rssi(LinearMw{dbm_to_mw(-5.0)}, m, rng).value ==
          doctest::Approx(m.rx_linear_max_dbm));
  }
  SUBCASE("silence clamps to the floor of the reporting range") {
    RadioModel m = quiet_calibrated();
    Rng rng(3);
    CHECK(report_rssi(LinearMw{0.0}, m, rng).value == doctest::Approx(-100.0));
  }
  SUBCASE("reporting noise has the configured spread") {
    RadioModel m = RadioModel::calibrated();
    m.rssi_resolution_db = 0.0;  // isolate the Gaussian term
    Rng rng(12345);
    std::vector<double> reports;
    for (int i = 0; i < 10000; ++i) {
      reports.push_back(report_rssi(LinearMw{dbm_to_mw(-50.0)}, m, rng).value);
    }
    CHECK(stddev(reports) == doctest::Approx(0.5).epsilon(0.10));
    CHECK(mean(reports) == doctest::Approx(-50.0).epsilon(0.001));
  }
  SUBCASE("quantization bound holds essentially always in the linear region") {
    const RadioModel m = RadioModel::calibrated();
    Rng rng(777);
    const double bound = m.rssi_resolution_db / 2.0 + 4.0 * m.rssi_noise_sigma_db;
    int violations = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
      const double true_dbm = -85.0 + 60.0 * rng.uniform01();
      const double rep = report_rssi(LinearMw{dbm_to_mw(true_dbm)}, m, rng).value;
      if (std::abs(rep - true_dbm) > bound) ++violations;
    }
    CHECK(static_cast<double>(violations) / n <= 1.0 - 0.9999 + 5e-4);
  }
}

TEST_CASE("noise-free proportionality between tx and rx") {
  // Inside the linear region the reported power moves dB-for-dB with the
  // transmit power: report = tx_dbm + gain_db, exactly.
  RadioModel m = RadioModel::calibrated();
  m.rssi_noise_sigma_db = 0.0;
  m.rssi_resolution_db = 0.0;
  m.noise_floor_dbm = -std::numeric_limits<double>::infinity();
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const double gain_db = rng.uniform(-70.0, -30.0);
    const double tx_dbm = rng.uniform(-20.0, 0.0);
    if (tx_dbm + gain_db < m.rx_linear_min_dbm || tx_dbm + gain_db > m.rx_linear_max_dbm) {
      continue;
    }
    const std::vector<double> gains = {db_to_linear_gain(gain_db)};
    const std::vector<double> tx = {tx_dbm};
    const double rx = distorted_received_mw(gains, tx, m).value;
    const double reported = report_rssi(LinearMw{rx}, m, rng).value;
    CHECK(reported == doctest::Approx(tx_dbm + gain_db).epsilon(1e-12));
  }
}

TEST_CASE("power ratio") {
  CHECK(power_ratio(LinearMw{1.0}, LinearMw{1.0}) == doctest::Approx(1.0));
  CHECK(power_ratio(LinearMw{0.9}, LinearMw{1.0}) == doctest::Approx(0.9));
  CHECK_THROWS_AS(power_ratio(LinearMw{1.0}, LinearMw{0.0}), std::domain_error);
}

TEST_CASE("additivity table validation and clamping") {
  CHECK_THROWS_AS(AdditivityTable({-30.0, -20.0}, {1.0, 1.0, 0.0, 1.0}), ConfigError);
  CHECK_THROWS_AS(AdditivityTable({-20.0, -30.0}, {1.0, 1.0, 1.0, 1.0}), ConfigError);
  AdditivityTable t({-30.0, -20.0}, {0.9, 1.0, 1.0, 0.7});
  // Beyond the grid the nearest edge applies.
  CHECK(t.rho(-10.0, -10.0) == doctest::Approx(0.7));
  CHECK(t.rho(-50.0, -50.0) == doctest::Approx(0.9));
}

TEST_CASE("radio model json round trip") {
  const RadioModel m = RadioModel::calibrated();
  const RadioModel back = radio_model_from_json_text(radio_model_to_json_text(m));
  CHECK(back.rx_linear_min_dbm == m.rx_linear_min_dbm);
  CHECK(back.rssi_noise_sigma_db == m.rssi_noise_sigma_db);
  CHECK(back.tx_distortion_db == m.tx_distortion_db);
  for (double a = -80.0; a <= -20.0; a += 3.0) {
    for (double b = -80.0; b <= -20.0; b += 3.0) {
      CHECK(back.additivity.rho(a, b) == doctest::Approx(m.additivity.rho(a, b)).epsilon(1e-12));
    }
  }

  const RadioModel ideal = radio_model_from_json_text("\"ideal\"");
  CHECK(ideal.noise_floor_mw() == 0.0);
  CHECK(ideal.additivity.is_ideal());
  CHECK_THROWS_AS(radio_model_from_json_text("\"nonsense\""), ConfigError);
}
