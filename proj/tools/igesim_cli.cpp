// Command-line front end: runs scenario files and writes their CSV artifacts.

#include <cstdio>
#include <filesystem>
#include <string>

#include "CLI11.hpp"

#include "igesim/errors.hpp"
#include "igesim/scenarios.hpp"

namespace {

constexpr int kExitUsage = 2;

void print_summary(const igesim::ScenarioResult& result) {
  std::printf("scenario            %s\n", result.name.c_str());
  std::printf("kind                %s\n", igesim::to_string(result.kind).c_str());
  for (const auto& [key, value] : result.summary) {
    std::printf("%-19s %s\n", key.c_str(), igesim::fmt_num(value).c_str());
  }
  for (const auto& w : result.warnings) {
    std::printf("warning: %s\n", w.c_str());
  }
}

struct KindInfo {
  const char* kind;
  const char* what;
};

constexpr KindInfo kKinds[] = {
    {"linearity-study", "two-sender power-ratio sweep: ratio CDF and binned heatmap"},
    {"controlled-ige", "star-topology gain estimation across vector counts"},
    {"condition-number-sweep", "random schedules bucketed by condition number vs. error"},
    {"flood-ige", "multi-hop flooding with per-cycle gain estimation"},
    {"vector-count-sweep", "flood estimation error boxplots per vector count"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interference-graph estimation via power-controlled concurrent flooding"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir = ".";
  std::uint64_t seed_override = 0;
  bool has_seed = false;
  int trials_override = 0;
  bool serial = false;
  int threads = 0;

  auto* run = app.add_subcommand("run", "Run a scenario and write its CSV files");
  run->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  run->add_option("--out", out_dir, "Output directory")->envname("IGESIM_OUT");
  run->add_option("--seed", seed_override, "Override the scenario seed")
      ->each([&](const std::string&) { has_seed = true; });
  run->add_option("--trials", trials_override, "Override the scenario trial count");
  run->add_flag("--serial", serial, "Use the serial trial runner");
  run->add_option("--threads", threads, "Cap OpenMP threads (0 = default)");

  auto* list = app.add_subcommand("list-scenarios", "List the recognized scenario kinds");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a scenario file and exit");
  validate->add_option("--scenario", validate_path, "Scenario JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (list->parsed()) {
      std::printf("%-24s %s\n", "kind", "description");
      for (const auto& k : kKinds) std::printf("%-24s %s\n", k.kind, k.what);
      return 0;
    }
    if (validate->parsed()) {
      const auto spec = igesim::load_scenario_file(validate_path);
      std::printf("OK: %s (%s, trials=%d, seed=%llu)\n", spec.name.c_str(),
                  igesim::to_string(spec.kind).c_str(), spec.trials,
                  static_cast<unsigned long long>(spec.seed));
      return 0;
    }

    auto spec = igesim::load_scenario_file(scenario_path);
    if (has_seed) spec.seed = seed_override;
    if (trials_override > 0) spec.trials = trials_override;
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif
    const auto result = igesim::run_scenario(
        spec, serial ? igesim::TrialMode::serial : igesim::TrialMode::parallel);

    print_summary(result);
    for (const auto& table : result.files) {
      const auto path = igesim::write_csv(out_dir, result.name, table);
      std::printf("wrote %s\n", path.string().c_str());
    }
    return 0;
  } catch (const igesim::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
