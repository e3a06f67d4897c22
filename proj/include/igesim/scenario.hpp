#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "igesim/flood_sim.hpp"
#include "igesim/power_plan.hpp"
#include "igesim/radio_model.hpp"
#include "igesim/topology.hpp"

namespace igesim {

enum class ScenarioKind {
  linearity_study,
  controlled_ige,
  condition_number_sweep,
  flood_ige,
  vector_count_sweep,
};

std::string to_string(ScenarioKind kind);
ScenarioKind scenario_kind_from_string(const std::string& s);

struct ScheduleConfig {
  int vectors = 4;
  std::vector<double> level_set_dbm = default_level_set_dbm();
  int candidates = 1000;
  double initiator_level_dbm = 0.0;
};

struct LinearityConfig {
  double strong_lo_dbm = -40.0, strong_hi_dbm = -20.0;
  double weak_lo_dbm = -80.0, weak_hi_dbm = -60.0;
  double step_db = 1.0;  // sweep granularity for the ratio CDF
  double bin_db = 4.0;   // heatmap bin width
};

struct ControlledConfig {
  int senders = 5;
  std::vector<int> vector_counts = {5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15};
  int cdf_vector_count = 11;  // error CDF is reported at this count
  double gain_db_lo = -50.0, gain_db_hi = -35.0;
};

struct CondSweepConfig {
  int senders = 5;
  int vectors = 5;
  int buckets = 10;
  double gain_db_lo = -50.0, gain_db_hi = -35.0;
};

struct VectorSweepConfig {
  std::vector<int> vector_counts = {2, 3, 4, 5, 6};
  // Rounds per cycle scale with the vector count (m * repeats_per_row) so the
  // averaging depth stays fixed and the sweep isolates the conditioning effect.
  int repeats_per_row = 7;
};

struct ScenarioSpec {
  std::string name;
  ScenarioKind kind = ScenarioKind::linearity_study;
  int trials = 1;
  std::uint64_t seed = 1;
  RadioModel model = RadioModel::calibrated();
  std::optional<NetworkTopology> topology;
  FloodConfig flood;
  ScheduleConfig schedule;
  LinearityConfig linearity;
  ControlledConfig controlled;
  CondSweepConfig cond_sweep;
  VectorSweepConfig vec_sweep;
};

// Parse / validate. Both throw ConfigError with a human-readable reason.
ScenarioSpec scenario_from_json_text(const std::string& text);
ScenarioSpec load_scenario_file(const std::filesystem::path& path);
void validate_scenario(const ScenarioSpec& spec);

// Radio models, schedules, and registries share the scenario JSON dialect.
std::string radio_model_to_json_text(const RadioModel& model);
RadioModel radio_model_from_json_text(const std::string& text);
std::string schedule_to_json_text(const PowerSchedule& schedule);
PowerSchedule schedule_from_json_text(const std::string& text);
std::string registry_to_json_text(const VectorRegistry& registry);
VectorRegistry registry_from_json_text(const std::string& text);

}  // namespace igesim
