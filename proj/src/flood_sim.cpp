#include "igesim/flood_sim.hpp"

#include <algorithm>
#include <cmath>

#include "igesim/errors.hpp"

namespace igesim {

void FloodConfig::validate() const {
  if (n_tx < 1) throw ConfigError("flood config: n_tx must be >= 1");
  if (packet_slots < 1) throw ConfigError("flood config: packet_slots must be >= 1");
  if (rounds_per_ige < 1) throw ConfigError("flood config: rounds_per_ige must be >= 1");
  if (update_period_rounds < 1) {
    throw ConfigError("flood config: update_period_rounds must be >= 1");
  }
  if (cycles < 1) throw ConfigError("flood config: cycles must be >= 1");
  if (decode_loss_prob < 0.0 || decode_loss_prob >= 1.0) {
    throw ConfigError("flood config: decode_loss_prob must lie in [0, 1)");
  }
  if (slots_per_round && *slots_per_round < 2) {
    throw ConfigError("flood config: slots_per_round must be >= 2");
  }
}

OverheadLedger control_plane_disseminate(const std::map<int, std::vector<int>>& plan_by_node,
                                         int cycle) {
  OverheadLedger ledger;
  for (const auto& [node, indices] : plan_by_node) {
    ledger.push_back({cycle, node, "plan", static_cast<int>(indices.size())});
  }
  return ledger;
}

MeasurementLog control_plane_collect(const MeasurementLog& log, OverheadLedger& ledger,
                                     int cycle) {
  std::map<int, int> entries_per_node;
  MeasurementLog copy;
  for (const auto& e : log.entries()) {
    copy.add(e.round, e.slot, e.node, e.rx_dbm);
    ++entries_per_node[e.node];
  }
  for (const auto& [node, count] : entries_per_node) {
    ledger.push_back({cycle, node, "report", 2 * count});
  }
  return copy;
}

HopRoundPlan build_round_plan(ScheduleStrategy strategy,
                              const std::map<int, PowerSchedule>& hop_schedules,
                              int rounds) {
  HopRoundPlan plan;
  plan.rounds = rounds;

  if (strategy == ScheduleStrategy::interleaved) {
    for (const auto& [hop, schedule] : hop_schedules) {
      auto& rows = plan.rows_by_hop[hop];
      rows.resize(static_cast<std::size_t>(rounds));
      for (int r = 0; r < rounds; ++r) rows[static_cast<std::size_t>(r)] = r % schedule.rounds;
      // Equal repeats per row: ignore the trailing incomplete period.
      const int counted = (rounds / schedule.rounds) * schedule.rounds;
      auto& cr = plan.counted_rounds_by_hop[hop];
      for (int r = 0; r < counted; ++r) cr.push_back(r);
      plan.dropped_rounds = std::max(plan.dropped_rounds, rounds - counted);
    }
    return plan;
  }

  // Sequential: one varying hop at a time; everyone else pins row 0. Rows
  // outside a hop's block still measure row 0, so every round stays usable.
  int varying_total = 0;
  for (const auto& [hop, schedule] : hop_schedules) {
    if (schedule.rounds > 1) varying_total += schedule.rounds;
  }
  if (varying_total > rounds) {
    throw ConfigError("build_round_plan: not enough rounds for sequential blocks");
  }
  for (const auto& [hop, schedule] : hop_schedules) {
    plan.rows_by_hop[hop].assign(static_cast<std::size_t>(rounds), 0);
  }
  int cursor = 0;
  const int reps = varying_total > 0 ? rounds / varying_total : 1;
  for (const auto& [hop, schedule] : hop_schedules) {
    if (schedule.rounds <= 1) continue;
    auto& rows = plan.rows_by_hop[hop];
    for (int row = 0; row < schedule.rounds; ++row) {
      for (int rep = 0; rep < reps && cursor < rounds; ++rep) {
        rows[static_cast<std::size_t>(cursor++)] = row;
      }
    }
  }
  for (const auto& [hop, schedule] : hop_schedules) {
    auto& cr = plan.counted_rounds_by_hop[hop];
    for (int r = 0; r < rounds; ++r) cr.push_back(r);
    (void)schedule;
  }
  return plan;
}

Baselines extract_baselines(const MeasurementLog& log, const std::vector<int>& hop_of_node,
                            int n_tx, int rounds, int packet_slots) {
  Baselines baselines;
  if (n_tx < 2) return baselines;  // estimation slot has no prior-hop senders
  for (int node = 0; node < static_cast<int>(hop_of_node.size()); ++node) {
    const int hop = hop_of_node[static_cast<std::size_t>(node)];
    if (hop < 2) continue;  // hop-1 receivers hear only the initiator, no baseline
    const int baseline_slot = (hop - 1) * packet_slots;
    auto& series = baselines[node];
    series.resize(static_cast<std::size_t>(rounds), 0.0);
    for (int r = 0; r < rounds; ++r) {
      const auto dbm = log.find_dbm(r, baseline_slot, node);
      if (dbm) series[static_cast<std::size_t>(r)] = dbm_to_mw(*dbm);
    }
  }
  return baselines;
}

FloodSimulator::FloodSimulator(NetworkTopology topology, RadioModel model,
                               FloodConfig config)
    : topology_(std::move(topology)), model_(std::move(model)), config_(config) {
  config_.validate();
  model_.validate();
  hops_ = assign_hops(topology_);
  max_hop_ = *std::max_element(hops_.begin(), hops_.end());
  slots_per_round_ = config_.slots_per_round.value_or(
      (max_hop_ + config_.n_tx) * config_.packet_slots + 1);
}

RoundTrace FloodSimulator::run_round(int round, const std::vector<double>& tx_dbm,
                                     MeasurementLog& log, Rng& rng) {
  const int n = topology_.nodes();
  if (static_cast<int>(tx_dbm.size()) != n) {
    throw std::invalid_argument("run_round: need one transmit power per node");
  }

  // Round isolation: flooding state starts fresh; only hop assignment and the
  // caller's plan position survive between rounds.
  std::vector<NodeState> states(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) states[static_cast<std::size_t>(v)].hop = hops_[static_cast<std::size_t>(v)];

  const double sensitivity_mw = dbm_to_mw(topology_.rx_sensitivity_dbm);
  const int burst = config_.n_tx * config_.packet_slots;

  RoundTrace trace;
  trace.transmitters_by_slot.resize(static_cast<std::size_t>(slots_per_round_));
  trace.decode_slot.assign(static_cast<std::size_t>(n), -1);
  trace.tx_dbm = tx_dbm;

  // The initiator owns slot 1 of every round.
  auto& init = states[static_cast<std::size_t>(topology_.initiator)];
  init.phase = NodeState::Phase::transmitting;
  init.remaining_tx_slots = burst;

  std::vector<int> decoded_this_slot;
  for (int slot = 1; slot <= slots_per_round_; ++slot) {
    auto& transmitters = trace.transmitters_by_slot[static_cast<std::size_t>(slot - 1)];
    for (int v = 0; v < n; ++v) {
      if (states[static_cast<std::size_t>(v)].phase == NodeState::Phase::transmitting) {
        transmitters.push_back(v);
      }
    }

    decoded_this_slot.clear();
    for (int v = 0; v < n; ++v) {
      NodeState& st = states[static_cast<std::size_t>(v)];
      if (st.phase == NodeState::Phase::transmitting) continue;

      // Superposed received power from all concurrent senders.
      std::vector<double> gains;
      std::vector<double> powers;
      gains.reserve(transmitters.size());
      powers.reserve(transmitters.size());
      for (int t : transmitters) {
        gains.push_back(topology_.gains.linear(t, v));
        powers.push_back(tx_dbm[static_cast<std::size_t>(t)]);
      }
      const LinearMw total = distorted_received_mw(gains, powers, model_);
      log.add(round, slot, v, report_rssi(total, model_, rng).value);

      // Concurrent transmitters carry the identical packet, so decoding
      // thresholds on the superposition.
      if (st.phase == NodeState::Phase::idle && !transmitters.empty() &&
          total.value >= sensitivity_mw) {
        st.consecutive_heard += 1;
        if (st.consecutive_heard >= config_.packet_slots) {
          if (config_.decode_loss_prob > 0.0 && rng.bernoulli(config_.decode_loss_prob)) {
            st.consecutive_heard = 0;  // burst error: retry on the next retransmission
          } else {
            decoded_this_slot.push_back(v);
            st.decode_slot = slot;
            trace.decode_slot[static_cast<std::size_t>(v)] = slot;
          }
        }
      } else if (st.phase == NodeState::Phase::idle) {
        st.consecutive_heard = 0;
      }
    }

    // Advance transmitters, then start the nodes that decoded this slot.
    for (int v = 0; v < n; ++v) {
      NodeState& st = states[static_cast<std::size_t>(v)];
      if (st.phase == NodeState::Phase::transmitting) {
        if (--st.remaining_tx_slots == 0) st.phase = NodeState::Phase::received;
      }
    }
    for (int v : decoded_this_slot) {
      NodeState& st = states[static_cast<std::size_t>(v)];
      st.phase = NodeState::Phase::transmitting;
      st.remaining_tx_slots = burst;
    }
  }
  return trace;
}

CycleResult FloodSimulator::run_ige_cycle(const std::map<int, PowerSchedule>& hop_schedules,
                                          Rng& rng, int cycle_index) {
  CycleResult out;
  const int rounds = config_.rounds_per_ige;
  const HopRoundPlan plan = build_round_plan(config_.strategy, hop_schedules, rounds);

  // Stable column order: hop members ascending by node id.
  std::map<int, std::vector<int>> members;
  for (int v = 0; v < topology_.nodes(); ++v) members[hops_[static_cast<std::size_t>(v)]].push_back(v);
  for (const auto& [hop, node_list] : members) {
    if (!hop_schedules.contains(hop)) {
      throw ConfigError("run_ige_cycle: no schedule for hop " + std::to_string(hop));
    }
    (void)node_list;
  }

  // Encode each hop's rows against its registry, deliver the per-round index
  // sequence, and drive transmissions from the decoded copy.
  std::map<int, std::vector<int>> plan_by_node;
  std::map<int, std::vector<std::vector<double>>> decoded_rows_by_hop;
  for (const auto& [hop, schedule] : hop_schedules) {
    const VectorRegistry registry = VectorRegistry::from_schedule_rows(schedule);
    const std::vector<int> row_indices = encode_plan(schedule, registry);
    std::vector<int> per_round;
    if (config_.strategy == ScheduleStrategy::interleaved) {
      per_round.reserve(static_cast<std::size_t>(schedule.rounds));
      for (int row = 0; row < schedule.rounds; ++row) {
        per_round.push_back(row_indices[static_cast<std::size_t>(row)]);
      }
    } else {
      const auto& rows = plan.rows_by_hop.at(hop);
      per_round.reserve(rows.size());
      for (int row : rows) per_round.push_back(row_indices[static_cast<std::size_t>(row)]);
    }
    for (int node : members[hop]) plan_by_node[node] = per_round;

    auto decoded = decode_plan(row_indices, registry);
    decoded_rows_by_hop.emplace(hop, std::move(decoded));
  }
  out.overhead = control_plane_disseminate(plan_by_node, cycle_index);

  // Flood all rounds of the cycle.
  ChannelGainMatrix base_gains = topology_.gains;
  for (int r = 0; r < rounds; ++r) {
    if (config_.gain_drift_sigma_db > 0.0) {
      ChannelGainMatrix drifted = base_gains;
      for (int i = 0; i < topology_.nodes(); ++i) {
        for (int j = 0; j < topology_.nodes(); ++j) {
          if (i == j || base_gains.linear(i, j) <= 0.0) continue;
          const double db = base_gains.db(i, j) + rng.normal(config_.gain_drift_sigma_db);
          drifted.set_linear(i, j, std::min(db_to_linear_gain(db), 1.0));
        }
      }
      topology_.gains = drifted;
    }
    std::vector<double> tx(static_cast<std::size_t>(topology_.nodes()), 0.0);
    for (const auto& [hop, node_list] : members) {
      const auto& rows = plan.rows_by_hop.at(hop);
      const auto& decoded = decoded_rows_by_hop.at(hop);
      const auto& row = decoded[static_cast<std::size_t>(rows[static_cast<std::size_t>(r)])];
      for (std::size_t c = 0; c < node_list.size(); ++c) {
        tx[static_cast<std::size_t>(node_list[c])] = row[c];
      }
    }
    out.traces.push_back(run_round(r, tx, out.log, rng));
  }
  topology_.gains = base_gains;

  // Centralized estimation at the initiator.
  const MeasurementLog collected = control_plane_collect(out.log, out.overhead, cycle_index);
  const Baselines baselines =
      extract_baselines(collected, hops_, config_.n_tx, rounds, config_.packet_slots);
  out.report = estimate_hopwise(collected, hop_schedules, hops_, baselines, plan,
                                config_.packet_slots);
  out.report.score_against(base_gains);
  return out;
}

}  // namespace igesim
