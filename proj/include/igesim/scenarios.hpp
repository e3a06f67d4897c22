#pragma once

#include <string>
#include <utility>
#include <vector>

#include "igesim/csv.hpp"
#include "igesim/scenario.hpp"
#include "igesim/trial_runner.hpp"

namespace igesim {

// Everything a scenario run produces: analysis-ready tables plus the summary
// statistics printed by the CLI (recomputable from the tables).
struct ScenarioResult {
  std::string name;
  ScenarioKind kind = ScenarioKind::linearity_study;
  std::vector<CsvTable> files;
  std::vector<std::pair<std::string, double>> summary;
  std::vector<std::string> warnings;

  double summary_value(const std::string& key) const;
  const CsvTable& file(const std::string& name) const;
};

ScenarioResult run_linearity_study(const ScenarioSpec& spec);
ScenarioResult run_controlled_ige(const ScenarioSpec& spec,
                                  TrialMode mode = TrialMode::parallel);
ScenarioResult run_condition_number_sweep(const ScenarioSpec& spec,
                                          TrialMode mode = TrialMode::parallel);
ScenarioResult run_flood_ige(const ScenarioSpec& spec);
ScenarioResult run_vector_count_sweep(const ScenarioSpec& spec,
                                      TrialMode mode = TrialMode::parallel);

ScenarioResult run_scenario(const ScenarioSpec& spec,
                            TrialMode mode = TrialMode::parallel);

}  // namespace igesim
