#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "igesim/estimator.hpp"
#include "igesim/measurement.hpp"
#include "igesim/power_plan.hpp"
#include "igesim/radio_model.hpp"
#include "igesim/rng.hpp"
#include "igesim/topology.hpp"

namespace igesim {

// How hops share the rounds of one estimation cycle.
//   interleaved: every hop rotates its own schedule each round.
//   sequential:  rounds are split into per-hop blocks; only the block's hop
//                varies while the others hold their first row.
enum class ScheduleStrategy { interleaved, sequential };

struct FloodConfig {
  int n_tx = 3;          // retransmissions per received packet
  int packet_slots = 1;  // slots one packet occupies
  int rounds_per_ige = 30;
  int update_period_rounds = 30;  // rounds between estimation cycles
  int cycles = 1;
  std::optional<int> slots_per_round;  // default (max_hop + n_tx) * packet_slots + 1
  double decode_loss_prob = 0.0;       // burst-error stand-in, off by default
  double gain_drift_sigma_db = 0.0;    // per-round, per-link jitter, off by default
  ScheduleStrategy strategy = ScheduleStrategy::interleaved;

  void validate() const;
};

// Per-node flooding state within one round.
struct NodeState {
  enum class Phase { idle, received, transmitting };
  Phase phase = Phase::idle;
  int remaining_tx_slots = 0;
  int consecutive_heard = 0;  // toward one full packet
  int hop = -1;
  int decode_slot = -1;  // -1 until the packet is decoded this round
};

// What happened in one round, for invariant checks and debugging.
struct RoundTrace {
  std::vector<std::vector<int>> transmitters_by_slot;  // [slot-1] -> node ids
  std::vector<int> decode_slot;                        // per node, -1 undecoded
  std::vector<double> tx_dbm;                          // per node this round
};

struct OverheadRecord {
  int cycle = 0;
  int node = 0;
  std::string op;  // "plan" or "report"
  int bytes = 0;
};
using OverheadLedger = std::vector<OverheadRecord>;

// Ideal out-of-band plan delivery: one byte per disseminated round index.
OverheadLedger control_plane_disseminate(const std::map<int, std::vector<int>>& plan_by_node,
                                         int cycle);

// Ideal lossless measurement collection at the initiator: the returned copy
// is identical; accounting charges two bytes per reported (round, power) pair.
MeasurementLog control_plane_collect(const MeasurementLog& log, OverheadLedger& ledger,
                                     int cycle);

// Assigns schedule rows to rounds for every hop under the chosen strategy.
HopRoundPlan build_round_plan(ScheduleStrategy strategy,
                              const std::map<int, PowerSchedule>& hop_schedules,
                              int rounds);

// Per-receiver baseline: the prior-hop contribution measured one packet slot
// before the receiver's estimation slot. Empty when n_tx == 1 (no prior hop
// co-transmits in the estimation slot).
Baselines extract_baselines(const MeasurementLog& log, const std::vector<int>& hop_of_node,
                            int n_tx, int rounds, int packet_slots);

struct CycleResult {
  MeasurementLog log;
  EstimationReport report;
  OverheadLedger overhead;
  std::vector<RoundTrace> traces;
};

// Slot-synchronized concurrent-flooding simulator. Single-threaded and
// deterministic: identical (topology, model, config, seed) reproduces
// identical logs and reports.
class FloodSimulator {
 public:
  FloodSimulator(NetworkTopology topology, RadioModel model, FloodConfig config);

  const std::vector<int>& hops() const { return hops_; }
  int max_hop() const { return max_hop_; }
  int slots_per_round() const { return slots_per_round_; }
  const NetworkTopology& topology() const { return topology_; }

  // One flooding round under the given per-node transmit powers. Appends one
  // log entry per listening node per slot.
  RoundTrace run_round(int round, const std::vector<double>& tx_dbm,
                       MeasurementLog& log, Rng& rng);

  // One full estimation cycle: disseminate plans, flood rounds_per_ige rounds
  // rotating schedule rows, collect measurements, estimate hop-wise, and
  // score against the ground truth.
  CycleResult run_ige_cycle(const std::map<int, PowerSchedule>& hop_schedules,
                            Rng& rng, int cycle_index = 0);

 private:
  NetworkTopology topology_;
  RadioModel model_;
  FloodConfig config_;
  std::vector<int> hops_;
  int max_hop_ = 0;
  int slots_per_round_ = 0;
};

}  // namespace igesim
