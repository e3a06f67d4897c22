#pragma once

#include <map>
#include <span>
#include <vector>

#include "igesim/rng.hpp"

namespace igesim {

// Default transmit levels at or below 0 dBm for the modeled SoC family.
std::vector<double> default_level_set_dbm();

// m x n transmit-power schedule over a discrete level set, stored in dBm.
// Rows dictate the per-slot (per-round) transmit powers of the n senders; the
// linear-scale (mW) matrix must be full-rank for gain recovery.
struct PowerSchedule {
  int rounds = 0;   // m
  int senders = 0;  // n
  std::vector<double> dbm;  // row-major, rounds x senders
  std::vector<double> level_set_dbm;
  std::vector<int> plan_indices;  // per-row registry index, once encoded
  bool linear_region_only = true;

  double at(int row, int col) const { return dbm[static_cast<std::size_t>(row) * senders + col]; }
  std::vector<double> row_dbm(int row) const;
  std::vector<double> row_mw(int row) const;
  std::vector<double> matrix_mw() const;  // row-major
  void validate() const;
};

// Ordered list of predefined transmit-power vectors; a schedule row is
// disseminated as its index here.
class VectorRegistry {
 public:
  VectorRegistry() = default;
  explicit VectorRegistry(std::vector<std::vector<double>> vectors_dbm);

  int size() const { return static_cast<int>(vectors_.size()); }
  const std::vector<double>& vector_dbm(int index) const;
  // Index of an exactly-matching vector (1e-9 tolerance), -1 if absent.
  int find(std::span<const double> row_dbm) const;

  // Distinct rows of a schedule, first occurrence order.
  static VectorRegistry from_schedule_rows(const PowerSchedule& s);

 private:
  std::vector<std::vector<double>> vectors_;
};

// sigma_max / sigma_min of the linear-scale matrix; +inf when rank-deficient.
double condition_number(const PowerSchedule& s);
double condition_number_mw(int rows, int cols, std::span<const double> mw);

// Full rank relative to epsilon = 1e-10 * sigma_max; false when m < n.
bool is_full_rank(const PowerSchedule& s);

// Draws `candidates` random matrices over the level set, discards the
// rank-deficient ones, and returns the survivor with the smallest condition
// number. Deterministic for a given rng state.
PowerSchedule generate_schedule(int senders, int rounds,
                                std::vector<double> level_set_dbm,
                                int candidates, Rng& rng);

std::vector<int> encode_plan(const PowerSchedule& s, const VectorRegistry& registry);
std::vector<std::vector<double>> decode_plan(std::span<const int> indices,
                                             const VectorRegistry& registry);

// One full-rank schedule per hop that has transmitters. Hop 0 (the initiator)
// transmits at a constant level so later hops can use it as a stable
// subtraction baseline; every other hop varies its powers across rounds.
std::map<int, PowerSchedule> per_hop_schedules(const std::vector<int>& hop_of_node,
                                               int rounds_per_hop,
                                               const std::vector<double>& level_set_dbm,
                                               int candidates, Rng& rng,
                                               double initiator_level_dbm = 0.0);

}  // namespace igesim
