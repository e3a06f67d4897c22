#include "igesim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "json.hpp"

#include "igesim/errors.hpp"

namespace igesim {

using nlohmann::json;

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::linearity_study: return "linearity-study";
    case ScenarioKind::controlled_ige: return "controlled-ige";
    case ScenarioKind::condition_number_sweep: return "condition-number-sweep";
    case ScenarioKind::flood_ige: return "flood-ige";
    case ScenarioKind::vector_count_sweep: return "vector-count-sweep";
  }
  return "unknown";
}

ScenarioKind scenario_kind_from_string(const std::string& s) {
  if (s == "linearity-study") return ScenarioKind::linearity_study;
  if (s == "controlled-ige") return ScenarioKind::controlled_ige;
  if (s == "condition-number-sweep") return ScenarioKind::condition_number_sweep;
  if (s == "flood-ige") return ScenarioKind::flood_ige;
  if (s == "vector-count-sweep") return ScenarioKind::vector_count_sweep;
  throw ConfigError("unknown scenario kind: " + s);
}

namespace {

double number_or(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  return j.at(key).get<double>();
}

int int_or(const json& j, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  return j.at(key).get<int>();
}

json additivity_to_json(const AdditivityTable& t) {
  json out;
  out["bins_dbm"] = t.bins_dbm();
  const int n = static_cast<int>(t.bins_dbm().size());
  std::vector<std::vector<double>> rho(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) rho[static_cast<std::size_t>(i)].push_back(t.at(i, j));
  }
  out["rho"] = rho;
  return out;
}

AdditivityTable additivity_from_json(const json& j) {
  const auto bins = j.at("bins_dbm").get<std::vector<double>>();
  const auto rows = j.at("rho").get<std::vector<std::vector<double>>>();
  std::vector<double> flat;
  for (const auto& row : rows) {
    if (row.size() != bins.size()) {
      throw ConfigError("additivity table: rho rows must match bins");
    }
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return AdditivityTable(bins, flat);
}

json radio_model_to_json(const RadioModel& m) {
  json out;
  out["tx_linear_max_dbm"] = m.tx_linear_max_dbm;
  out["rx_linear_min_dbm"] = m.rx_linear_min_dbm;
  out["rx_linear_max_dbm"] = m.rx_linear_max_dbm;
  if (std::isfinite(m.noise_floor_dbm)) {
    out["noise_floor_dbm"] = m.noise_floor_dbm;
  } else {
    out["noise_floor_dbm"] = nullptr;  // floor disabled
  }
  out["rssi_resolution_db"] = m.rssi_resolution_db;
  out["rssi_noise_sigma_db"] = m.rssi_noise_sigma_db;
  json distortion = json::array();
  for (const auto& [level, offset] : m.tx_distortion_db) {
    distortion.push_back({{"level_dbm", level}, {"offset_db", offset}});
  }
  out["tx_distortion"] = distortion;
  out["additivity_table"] = additivity_to_json(m.additivity);
  return out;
}

RadioModel radio_model_from_json(const json& j) {
  if (j.is_string()) {
    const auto preset = j.get<std::string>();
    if (preset == "ideal") return RadioModel::ideal();
    if (preset == "calibrated") return RadioModel::calibrated();
    throw ConfigError("unknown radio model preset: " + preset);
  }
  RadioModel m;
  m.tx_linear_max_dbm = number_or(j, "tx_linear_max_dbm", m.tx_linear_max_dbm);
  m.rx_linear_min_dbm = number_or(j, "rx_linear_min_dbm", m.rx_linear_min_dbm);
  m.rx_linear_max_dbm = number_or(j, "rx_linear_max_dbm", m.rx_linear_max_dbm);
  if (j.contains("noise_floor_dbm") && j.at("noise_floor_dbm").is_null()) {
    m.noise_floor_dbm = -std::numeric_limits<double>::infinity();
  } else {
    m.noise_floor_dbm = number_or(j, "noise_floor_dbm", m.noise_floor_dbm);
  }
  m.rssi_resolution_db = number_or(j, "rssi_resolution_db", m.rssi_resolution_db);
  m.rssi_noise_sigma_db = number_or(j, "rssi_noise_sigma_db", m.rssi_noise_sigma_db);
  if (j.contains("tx_distortion")) {
    for (const auto& e : j.at("tx_distortion")) {
      m.tx_distortion_db[e.at("level_dbm").get<double>()] = e.at("offset_db").get<double>();
    }
  }
  if (j.contains("additivity_table")) {
    m.additivity = additivity_from_json(j.at("additivity_table"));
  }
  m.validate();
  return m;
}

NetworkTopology topology_from_json(const json& j, std::uint64_t seed) {
  NetworkTopology topo;
  const int initiator = int_or(j, "initiator", 0);
  const double sensitivity = number_or(j, "rx_sensitivity_dbm", -90.0);
  if (j.contains("gains_db")) {
    std::vector<std::vector<double>> db;
    for (const auto& row : j.at("gains_db")) {
      std::vector<double> r;
      for (const auto& cell : row) {
        if (cell.is_null()) {
          r.push_back(-std::numeric_limits<double>::infinity());
        } else {
          r.push_back(cell.get<double>());
        }
      }
      db.push_back(std::move(r));
    }
    topo.gains = ChannelGainMatrix::from_db(db);
  } else if (j.contains("positions_m")) {
    std::vector<std::pair<double, double>> pos;
    for (const auto& p : j.at("positions_m")) {
      pos.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    }
    PathLossParams params;
    if (j.contains("path_loss")) {
      const auto& pl = j.at("path_loss");
      params.ref_loss_db = number_or(pl, "ref_loss_db", params.ref_loss_db);
      params.ref_distance_m = number_or(pl, "ref_distance_m", params.ref_distance_m);
      params.exponent = number_or(pl, "exponent", params.exponent);
      params.shadowing_sigma_db = number_or(pl, "shadowing_sigma_db", params.shadowing_sigma_db);
    }
    Rng rng(splitmix64(seed ^ 0x746f706fULL));  // topology-local stream
    return topology_from_positions(pos, params, initiator, sensitivity, rng);
  } else {
    throw ConfigError("topology: need gains_db or positions_m");
  }
  topo.initiator = initiator;
  topo.rx_sensitivity_dbm = sensitivity;
  return topo;
}

ScheduleStrategy strategy_from_string(const std::string& s) {
  if (s == "interleaved") return ScheduleStrategy::interleaved;
  if (s == "sequential") return ScheduleStrategy::sequential;
  throw ConfigError("unknown schedule strategy: " + s);
}

}  // namespace

ScenarioSpec scenario_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario JSON parse error: ") + e.what());
  }
  try {
    ScenarioSpec spec;
    spec.name = j.at("name").get<std::string>();
    spec.kind = scenario_kind_from_string(j.at("kind").get<std::string>());
    spec.trials = int_or(j, "trials", 1);
    spec.seed = j.contains("seed") ? j.at("seed").get<std::uint64_t>() : 1;
    if (j.contains("radio_model")) {
      spec.model = radio_model_from_json(j.at("radio_model"));
    }
    if (j.contains("topology")) {
      spec.topology = topology_from_json(j.at("topology"), spec.seed);
    }
    if (j.contains("flood")) {
      const auto& f = j.at("flood");
      spec.flood.n_tx = int_or(f, "n_tx", spec.flood.n_tx);
      spec.flood.packet_slots = int_or(f, "packet_slots", spec.flood.packet_slots);
      spec.flood.rounds_per_ige = int_or(f, "rounds_per_ige", spec.flood.rounds_per_ige);
      spec.flood.update_period_rounds =
          int_or(f, "update_period_rounds", spec.flood.update_period_rounds);
      spec.flood.cycles = int_or(f, "cycles", spec.flood.cycles);
      if (f.contains("slots_per_round") && !f.at("slots_per_round").is_null()) {
        spec.flood.slots_per_round = f.at("slots_per_round").get<int>();
      }
      spec.flood.decode_loss_prob = number_or(f, "decode_loss_prob", 0.0);
      spec.flood.gain_drift_sigma_db = number_or(f, "gain_drift_sigma_db", 0.0);
      if (f.contains("schedule_strategy")) {
        spec.flood.strategy = strategy_from_string(f.at("schedule_strategy").get<std::string>());
      }
    }
    if (j.contains("schedule")) {
      const auto& s = j.at("schedule");
      spec.schedule.vectors = int_or(s, "vectors", spec.schedule.vectors);
      if (s.contains("level_set_dbm")) {
        spec.schedule.level_set_dbm = s.at("level_set_dbm").get<std::vector<double>>();
      }
      spec.schedule.candidates = int_or(s, "candidates", spec.schedule.candidates);
      spec.schedule.initiator_level_dbm =
          number_or(s, "initiator_level_dbm", spec.schedule.initiator_level_dbm);
    }
    if (j.contains("study")) {
      const auto& st = j.at("study");
      auto& lin = spec.linearity;
      lin.strong_lo_dbm = number_or(st, "strong_lo_dbm", lin.strong_lo_dbm);
      lin.strong_hi_dbm = number_or(st, "strong_hi_dbm", lin.strong_hi_dbm);
      lin.weak_lo_dbm = number_or(st, "weak_lo_dbm", lin.weak_lo_dbm);
      lin.weak_hi_dbm = number_or(st, "weak_hi_dbm", lin.weak_hi_dbm);
      lin.step_db = number_or(st, "step_db", lin.step_db);
      lin.bin_db = number_or(st, "bin_db", lin.bin_db);
      auto& c = spec.controlled;
      c.senders = int_or(st, "senders", c.senders);
      if (st.contains("vector_counts")) {
        c.vector_counts = st.at("vector_counts").get<std::vector<int>>();
        spec.vec_sweep.vector_counts = c.vector_counts;
      }
      c.cdf_vector_count = int_or(st, "cdf_vector_count", c.cdf_vector_count);
      c.gain_db_lo = number_or(st, "gain_db_lo", c.gain_db_lo);
      c.gain_db_hi = number_or(st, "gain_db_hi", c.gain_db_hi);
      spec.vec_sweep.repeats_per_row =
          int_or(st, "repeats_per_row", spec.vec_sweep.repeats_per_row);
      auto& cs = spec.cond_sweep;
      cs.senders = c.senders;
      cs.vectors = int_or(st, "vectors", cs.vectors);
      cs.buckets = int_or(st, "buckets", cs.buckets);
      cs.gain_db_lo = c.gain_db_lo;
      cs.gain_db_hi = c.gain_db_hi;
    }
    validate_scenario(spec);
    return spec;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario JSON: ") + e.what());
  }
}

ScenarioSpec load_scenario_file(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open scenario file: " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return scenario_from_json_text(ss.str());
}

void validate_scenario(const ScenarioSpec& spec) {
  if (spec.trials < 1) throw ConfigError("scenario: trials must be >= 1");
  spec.model.validate();
  spec.flood.validate();
  if (spec.schedule.level_set_dbm.empty()) {
    throw ConfigError("scenario: empty level set");
  }
  if (spec.schedule.candidates < 1) {
    throw ConfigError("scenario: schedule candidates must be >= 1");
  }
  switch (spec.kind) {
    case ScenarioKind::linearity_study:
      if (spec.linearity.step_db <= 0 || spec.linearity.bin_db <= 0) {
        throw ConfigError("linearity study: step and bin width must be > 0");
      }
      break;
    case ScenarioKind::controlled_ige: {
      if (spec.controlled.senders < 1) throw ConfigError("controlled ige: need senders");
      for (int m : spec.controlled.vector_counts) {
        if (m < spec.controlled.senders) {
          throw ConfigError("controlled ige: vector count " + std::to_string(m) +
                            " below sender count (rank)");
        }
      }
      break;
    }
    case ScenarioKind::condition_number_sweep:
      if (spec.cond_sweep.vectors < spec.cond_sweep.senders) {
        throw ConfigError("condition sweep: vectors below sender count (rank)");
      }
      if (spec.cond_sweep.buckets < 2) throw ConfigError("condition sweep: need >= 2 buckets");
      break;
    case ScenarioKind::flood_ige: {
      if (!spec.topology) throw ConfigError("flood ige: topology required");
      spec.topology->validate();
      const auto hops = assign_hops(*spec.topology);
      std::map<int, int> sizes;
      for (int h : hops) ++sizes[h];
      int widest = 1;
      for (const auto& [hop, size] : sizes) {
        if (hop > 0) widest = std::max(widest, size);
      }
      if (spec.schedule.vectors < widest) {
        throw ConfigError("flood ige: vectors below widest hop size (rank)");
      }
      if (spec.flood.rounds_per_ige < std::max(spec.schedule.vectors, 2)) {
        throw ConfigError("flood ige: rounds_per_ige below the widest hop schedule");
      }
      break;
    }
    case ScenarioKind::vector_count_sweep: {
      if (!spec.topology) throw ConfigError("vector sweep: topology required");
      spec.topology->validate();
      const auto hops = assign_hops(*spec.topology);
      std::map<int, int> sizes;
      for (int h : hops) ++sizes[h];
      int widest = 1;
      for (const auto& [hop, size] : sizes) {
        if (hop > 0) widest = std::max(widest, size);
      }
      for (int m : spec.vec_sweep.vector_counts) {
        if (m < widest) {
          throw ConfigError("vector sweep: count " + std::to_string(m) +
                            " below widest hop size (rank)");
        }
      }
      break;
    }
  }
}

std::string radio_model_to_json_text(const RadioModel& model) {
  return radio_model_to_json(model).dump(2);
}

RadioModel radio_model_from_json_text(const std::string& text) {
  try {
    return radio_model_from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("radio model JSON: ") + e.what());
  }
}

std::string schedule_to_json_text(const PowerSchedule& schedule) {
  json j;
  j["rounds"] = schedule.rounds;
  j["senders"] = schedule.senders;
  std::vector<std::vector<double>> rows;
  for (int r = 0; r < schedule.rounds; ++r) rows.push_back(schedule.row_dbm(r));
  j["matrix_dbm"] = rows;
  j["level_set_dbm"] = schedule.level_set_dbm;
  j["plan_indices"] = schedule.plan_indices;
  j["linear_region_only"] = schedule.linear_region_only;
  return j.dump(2);
}

PowerSchedule schedule_from_json_text(const std::string& text) {
  try {
    const json j = json::parse(text);
    PowerSchedule s;
    s.rounds = j.at("rounds").get<int>();
    s.senders = j.at("senders").get<int>();
    for (const auto& row : j.at("matrix_dbm")) {
      const auto r = row.get<std::vector<double>>();
      s.dbm.insert(s.dbm.end(), r.begin(), r.end());
    }
    if (j.contains("level_set_dbm")) {
      s.level_set_dbm = j.at("level_set_dbm").get<std::vector<double>>();
    }
    if (j.contains("plan_indices")) {
      s.plan_indices = j.at("plan_indices").get<std::vector<int>>();
    }
    if (j.contains("linear_region_only")) {
      s.linear_region_only = j.at("linear_region_only").get<bool>();
    }
    s.validate();
    return s;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("schedule JSON: ") + e.what());
  }
}

std::string registry_to_json_text(const VectorRegistry& registry) {
  json j;
  std::vector<std::vector<double>> vectors;
  for (int i = 0; i < registry.size(); ++i) vectors.push_back(registry.vector_dbm(i));
  j["vectors_dbm"] = vectors;
  return j.dump(2);
}

VectorRegistry registry_from_json_text(const std::string& text) {
  try {
    const json j = json::parse(text);
    return VectorRegistry(j.at("vectors_dbm").get<std::vector<std::vector<double>>>());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("registry JSON: ") + e.what());
  }
}

}  // namespace igesim
