// Compares the serial reference trial runner against the OpenMP one on a
// representative estimation workload and checks that both produce identical
// results.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "igesim/scenarios.hpp"

using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

igesim::ScenarioSpec workload(int trials) {
  igesim::ScenarioSpec spec;
  spec.name = "bench";
  spec.kind = igesim::ScenarioKind::controlled_ige;
  spec.trials = trials;
  spec.seed = 99;
  spec.model = igesim::RadioModel::calibrated();
  spec.controlled.vector_counts = {5, 7, 9, 11};
  spec.controlled.cdf_vector_count = 11;
  spec.schedule.candidates = 200;
  return spec;
}

bool same_tables(const igesim::ScenarioResult& a, const igesim::ScenarioResult& b) {
  if (a.files.size() != b.files.size()) return false;
  for (std::size_t i = 0; i < a.files.size(); ++i) {
    if (a.files[i].render() != b.files[i].render()) return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  int trials = 2000;
  for (int i = 1; i + 1 < argc; i += 2) {
    if (std::strcmp(argv[i], "--trials") == 0) trials = std::atoi(argv[i + 1]);
  }

  const auto spec = workload(trials);
  std::printf("workload: controlled five-sender estimation, %d trials\n", trials);

  auto t0 = Clock::now();
  const auto serial = igesim::run_controlled_ige(spec, igesim::TrialMode::serial);
  const double t_serial = seconds_since(t0);

  t0 = Clock::now();
  const auto parallel = igesim::run_controlled_ige(spec, igesim::TrialMode::parallel);
  const double t_parallel = seconds_since(t0);

  const bool identical = same_tables(serial, parallel);
  std::printf("threads            %d\n", igesim::trial_threads());
  std::printf("serial             %.3f s\n", t_serial);
  std::printf("parallel           %.3f s\n", t_parallel);
  std::printf("speedup            %.2fx\n", t_serial / t_parallel);
  std::printf("outputs identical  %s\n", identical ? "yes" : "NO");
  return identical ? 0 : 1;
}
