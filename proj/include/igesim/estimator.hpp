#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "igesim/csv.hpp"
#include "igesim/gain_matrix.hpp"
#include "igesim/measurement.hpp"
#include "igesim/power_plan.hpp"

namespace igesim {

// Least-squares gain recovery for one receiver.
struct GainSolution {
  std::vector<double> gains;  // linear scale, clamped at 0
  double residual_norm = 0.0;
  bool clamped = false;  // some component went negative and was zeroed
};

// Solves schedule_mw * h = rx for h (exact when m == n, least squares when
// m > n). Throws UnsolvableError on a rank-deficient schedule.
GainSolution solve_gains(const PowerSchedule& schedule, std::span<const double> rx_mw);

struct SubtractResult {
  double mw = 0.0;
  bool clamped = false;  // known exceeded total (noise or model violation)
};

// max(total - known, 0), always in linear milliwatts.
SubtractResult subtract_interference(double total_mw, double known_mw);

// Mean received power per schedule row over repeated rounds. Rounds beyond
// the last complete period are dropped and counted.
struct RowMeans {
  std::vector<double> mean_mw;
  int repeats = 0;
  int dropped_rounds = 0;
};
RowMeans average_repeats(std::span<const double> per_round_mw, int period);

// Log-level form: per-node means of the measurements taken at `slot`, with
// rounds 0..rounds-1 grouped by row = round % period. Throws
// IncompleteDataError (listing the gaps) when a row has no repeats.
std::map<int, RowMeans> average_repeats(const MeasurementLog& log, int period,
                                        int slot, int rounds);

// |est - true| in dB; +inf when the estimate was clamped to zero.
double gain_error_db(double h_est_linear, double h_true_linear);

struct LinkEstimate {
  int sender = 0;
  int receiver = 0;
  int hop = 0;  // sender's hop index
  double h_est_linear = 0.0;
  double h_est_db = 0.0;  // -inf when clamped to zero
  double cond_number = 1.0;
  double residual_mw = 0.0;
  bool clamped = false;
  std::optional<double> h_true_db;
  std::optional<double> error_db;
};

// Estimated downstream gains for a completed estimation cycle.
struct EstimationReport {
  std::vector<LinkEstimate> links;
  std::map<int, double> cond_by_hop;
  std::vector<std::string> warnings;
  int dropped_rounds = 0;

  // Fill h_true_db / error_db from ground truth (links with zero true gain
  // keep no error, they are out of scope for scoring).
  void score_against(const ChannelGainMatrix& truth);

  // One row per link: sender, receiver, hop, h_true_db, h_est_db, error_db,
  // cond_number, residual_mw.
  CsvTable to_csv() const;
};

// Per-round baseline power (mW) to subtract before solving, keyed by node.
using Baselines = std::map<int, std::vector<double>>;

// Per-hop, per-round schedule row assignment for one estimation cycle.
struct HopRoundPlan {
  std::map<int, std::vector<int>> rows_by_hop;  // hop -> row index per round
  // Rounds whose measurements enter the averages, per hop (complete periods
  // only for cyclic plans).
  std::map<int, std::vector<int>> counted_rounds_by_hop;
  int rounds = 0;
  int dropped_rounds = 0;
};

// Hop-wise gain recovery: for every hop k with a next hop, subtract each
// hop-(k+1) receiver's baseline from its slot-(k+1) measurement per round,
// average repeats per schedule row, and solve against hop k's schedule.
// Per-hop failures become warnings; other hops still produce estimates.
EstimationReport estimate_hopwise(const MeasurementLog& log,
                                  const std::map<int, PowerSchedule>& hop_schedules,
                                  const std::vector<int>& hop_of_node,
                                  const Baselines& baselines,
                                  const HopRoundPlan& plan,
                                  int packet_slots = 1);

}  // namespace igesim
