#include "igesim/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "igesim/errors.hpp"
#include "igesim/stats.hpp"

namespace igesim {

double ScenarioResult::summary_value(const std::string& key) const {
  for (const auto& [k, v] : summary) {
    if (k == key) return v;
  }
  throw Error("scenario summary has no key: " + key);
}

const CsvTable& ScenarioResult::file(const std::string& name) const {
  for (const auto& f : files) {
    if (f.name == name) return f;
  }
  throw Error("scenario produced no file named: " + name);
}

namespace {

// Ratio of the distorted superposition to the sum of the individual
// contributions, for two senders whose signals arrive at a and b dBm.
double sweep_ratio(double a_dbm, double b_dbm, const RadioModel& model) {
  const std::vector<double> gains = {dbm_to_mw(a_dbm), dbm_to_mw(b_dbm)};
  const std::vector<double> tx = {0.0, 0.0};
  const double actual =
      distorted_received_mw(gains, tx, model).value - model.noise_floor_mw();
  const double expected = gains[0] + gains[1];
  return power_ratio(LinearMw{actual}, LinearMw{expected});
}

CsvTable cdf_table(const std::string& name, const std::string& value_column,
                   std::vector<double> values) {
  CsvTable t;
  t.name = name;
  t.header = {value_column, "cum_frac"};
  for (const auto& [v, frac] : make_cdf(std::move(values))) {
    t.add_row({fmt_num(v), fmt_num(frac)});
  }
  return t;
}

std::vector<double> bin_centers(double lo, double hi, double width) {
  std::vector<double> centers;
  for (double c = lo + width / 2.0; c < hi; c += width) centers.push_back(c);
  return centers;
}

// One controlled estimation: n senders and one listener, one noisy
// measurement per schedule row, least-squares recovery.
struct ControlledTrial {
  double cond = 0.0;
  std::vector<double> errors_db;
};

ControlledTrial controlled_trial(const RadioModel& model, int senders,
                                 const PowerSchedule& schedule,
                                 std::span<const double> gains, Rng& rng) {
  MeasurementLog log;
  const int receiver = senders;  // ids 0..senders-1 transmit
  for (int row = 0; row < schedule.rounds; ++row) {
    const auto tx_dbm = schedule.row_dbm(row);
    const LinearMw rx = distorted_received_mw(gains, tx_dbm, model);
    log.add(row, 1, receiver, report_rssi(rx, model, rng).value);
  }
  const auto means = average_repeats(log, schedule.rounds, 1, schedule.rounds);
  const GainSolution sol = solve_gains(schedule, means.at(receiver).mean_mw);

  ControlledTrial out;
  out.cond = condition_number(schedule);
  for (int s = 0; s < senders; ++s) {
    out.errors_db.push_back(gain_error_db(sol.gains[static_cast<std::size_t>(s)],
                                          gains[static_cast<std::size_t>(s)]));
  }
  return out;
}

std::vector<double> random_gains(int senders, double db_lo, double db_hi, Rng& rng) {
  std::vector<double> gains(static_cast<std::size_t>(senders));
  for (auto& g : gains) g = db_to_linear_gain(rng.uniform(db_lo, db_hi));
  return gains;
}

double mean_finite(const std::vector<double>& values) {
  std::vector<double> finite;
  for (double v : values) {
    if (std::isfinite(v)) finite.push_back(v);
  }
  if (finite.empty()) return std::numeric_limits<double>::infinity();
  return mean(finite);
}

}  // namespace

ScenarioResult run_linearity_study(const ScenarioSpec& spec) {
  ScenarioResult result;
  result.name = spec.name;
  result.kind = spec.kind;
  const auto& lin = spec.linearity;
  const RadioModel& model = spec.model;

  struct Region {
    const char* label;
    double lo, hi;
  };
  const Region regions[] = {{"strong", lin.strong_lo_dbm, lin.strong_hi_dbm},
                            {"weak", lin.weak_lo_dbm, lin.weak_hi_dbm}};

  // Dense pairwise sweep for the ratio distribution.
  std::vector<double> ratios;
  std::vector<double> strong_ratios;
  for (const auto& region : regions) {
    for (double a = region.lo; a <= region.hi + 1e-9; a += lin.step_db) {
      for (double b = region.lo; b <= region.hi + 1e-9; b += lin.step_db) {
        const double r = sweep_ratio(a, b, model);
        ratios.push_back(r);
        if (region.label == regions[0].label) strong_ratios.push_back(r);
      }
    }
  }

  // Binned heatmap, one measurement per bin-center pair.
  CsvTable heatmap;
  heatmap.name = "ratio_heatmap";
  heatmap.header = {"region", "rx1_bin_dbm", "rx2_bin_dbm", "mean_ratio"};
  std::vector<double> strong_diag;
  for (const auto& region : regions) {
    const auto centers = bin_centers(region.lo, region.hi, lin.bin_db);
    for (double c1 : centers) {
      for (double c2 : centers) {
        const double r = sweep_ratio(c1, c2, model);
        heatmap.add_row({region.label, fmt_num(c1), fmt_num(c2), fmt_num(r)});
        if (region.label == regions[0].label && c1 == c2) strong_diag.push_back(r);
      }
    }
  }

  const double frac = fraction_in_range(ratios, 0.9, 1.1);
  const double frac_strong = fraction_in_range(strong_ratios, 0.9, 1.1);
  bool diag_monotone = true;
  for (std::size_t i = 1; i < strong_diag.size(); ++i) {
    if (strong_diag[i] > strong_diag[i - 1] + 1e-12) diag_monotone = false;
  }

  result.files.push_back(cdf_table("ratio_cdf", "power_ratio", ratios));
  result.files.push_back(std::move(heatmap));
  result.summary = {
      {"samples", static_cast<double>(ratios.size())},
      {"ratio_frac_in_0.9_1.1", frac},
      {"strong_ratio_frac_in_0.9_1.1", frac_strong},
      {"strong_diag_monotone", diag_monotone ? 1.0 : 0.0},
      {"strong_diag_first_ratio", strong_diag.empty() ? 0.0 : strong_diag.front()},
      {"strong_diag_last_ratio", strong_diag.empty() ? 0.0 : strong_diag.back()},
  };
  return result;
}

ScenarioResult run_controlled_ige(const ScenarioSpec& spec, TrialMode mode) {
  ScenarioResult result;
  result.name = spec.name;
  result.kind = spec.kind;
  const auto& cfg = spec.controlled;

  struct TrialOut {
    std::vector<double> conds;                    // per vector count
    std::vector<std::vector<double>> errors_db;   // per vector count
  };

  auto one_trial = [&](int, std::uint64_t seed) {
    Rng rng(seed);
    const auto gains = random_gains(cfg.senders, cfg.gain_db_lo, cfg.gain_db_hi, rng);
    TrialOut out;
    for (int m : cfg.vector_counts) {
      const PowerSchedule schedule = generate_schedule(
          cfg.senders, m, spec.schedule.level_set_dbm, spec.schedule.candidates, rng);
      const ControlledTrial t = controlled_trial(spec.model, cfg.senders, schedule, gains, rng);
      out.conds.push_back(t.cond);
      out.errors_db.push_back(t.errors_db);
    }
    return out;
  };
  const auto trials = run_trials<TrialOut>(spec.trials, spec.seed, one_trial, mode);

  CsvTable curve;
  curve.name = "cond_curve";
  curve.header = {"vector_count", "mean_cond", "mean_error_db"};
  CsvTable per_trial;
  per_trial.name = "trial_stats";
  per_trial.header = {"trial", "vector_count", "cond_number", "mean_error_db"};

  std::vector<double> cdf_errors;
  double cdf_mean_cond = 0.0;
  for (std::size_t ci = 0; ci < cfg.vector_counts.size(); ++ci) {
    std::vector<double> conds;
    std::vector<double> all_errors;
    for (std::size_t t = 0; t < trials.size(); ++t) {
      conds.push_back(trials[t].conds[ci]);
      const auto& errs = trials[t].errors_db[ci];
      all_errors.insert(all_errors.end(), errs.begin(), errs.end());
      per_trial.add_row({fmt_num(static_cast<double>(t)),
                         fmt_num(cfg.vector_counts[ci]),
                         fmt_num(trials[t].conds[ci]), fmt_num(mean_finite(errs))});
    }
    curve.add_row({fmt_num(cfg.vector_counts[ci]), fmt_num(mean(conds)),
                   fmt_num(mean_finite(all_errors))});
    if (cfg.vector_counts[ci] == cfg.cdf_vector_count) {
      cdf_errors = all_errors;
      cdf_mean_cond = mean(conds);
    }
  }
  if (cdf_errors.empty()) {
    throw ConfigError("controlled ige: cdf_vector_count not in vector_counts");
  }

  const double frac3 = fraction_below(cdf_errors, 3.0);
  result.files.push_back(cdf_table("error_cdf", "error_db", cdf_errors));
  result.files.push_back(std::move(curve));
  result.files.push_back(std::move(per_trial));
  result.summary = {
      {"trials", static_cast<double>(spec.trials)},
      {"err_frac_below_3db", frac3},
      {"mean_cond_at_cdf_count", cdf_mean_cond},
      {"cdf_vector_count", static_cast<double>(cfg.cdf_vector_count)},
  };
  return result;
}

ScenarioResult run_condition_number_sweep(const ScenarioSpec& spec, TrialMode mode) {
  ScenarioResult result;
  result.name = spec.name;
  result.kind = spec.kind;
  const auto& cfg = spec.cond_sweep;

  struct TrialOut {
    double cond = 0.0;
    double mean_error_db = 0.0;
  };

  if (cfg.senders > 1 && spec.schedule.level_set_dbm.size() < 2) {
    throw ConfigError("condition sweep: level set too small");
  }
  auto one_trial = [&](int, std::uint64_t seed) {
    Rng rng(seed);
    const auto gains = random_gains(cfg.senders, cfg.gain_db_lo, cfg.gain_db_hi, rng);
    // First full-rank draw, no condition-number selection: the spread of
    // condition numbers is the object of study here.
    PowerSchedule schedule;
    for (int attempt = 0;; ++attempt) {
      try {
        schedule = generate_schedule(cfg.senders, cfg.vectors,
                                     spec.schedule.level_set_dbm, 1, rng);
        break;
      } catch (const ConfigError&) {
        if (attempt > 1000) throw;  // not just bad luck
      }
    }
    const ControlledTrial t = controlled_trial(spec.model, cfg.senders, schedule, gains, rng);
    return TrialOut{t.cond, mean_finite(t.errors_db)};
  };
  auto trials = run_trials<TrialOut>(spec.trials, spec.seed, one_trial, mode);

  CsvTable per_trial;
  per_trial.name = "trial_stats";
  per_trial.header = {"trial", "cond_number", "mean_error_db"};
  for (std::size_t t = 0; t < trials.size(); ++t) {
    per_trial.add_row({fmt_num(static_cast<double>(t)), fmt_num(trials[t].cond),
                       fmt_num(trials[t].mean_error_db)});
  }

  // Equal-count buckets over the sorted condition numbers.
  std::sort(trials.begin(), trials.end(),
            [](const TrialOut& a, const TrialOut& b) { return a.cond < b.cond; });
  const int buckets = std::min<int>(cfg.buckets, static_cast<int>(trials.size()));
  CsvTable bucket_table;
  bucket_table.name = "cond_buckets";
  bucket_table.header = {"bucket", "cond_lo", "cond_hi", "mean_cond",
                         "mean_error_db", "samples"};
  std::vector<double> bucket_conds, bucket_errors;
  for (int b = 0; b < buckets; ++b) {
    const std::size_t lo = trials.size() * static_cast<std::size_t>(b) / buckets;
    const std::size_t hi = trials.size() * static_cast<std::size_t>(b + 1) / buckets;
    if (lo >= hi) continue;
    std::vector<double> conds, errs;
    for (std::size_t i = lo; i < hi; ++i) {
      conds.push_back(trials[i].cond);
      if (std::isfinite(trials[i].mean_error_db)) errs.push_back(trials[i].mean_error_db);
    }
    const double mc = mean(conds);
    const double me = errs.empty() ? std::numeric_limits<double>::infinity() : mean(errs);
    bucket_table.add_row({fmt_num(b), fmt_num(conds.front()), fmt_num(conds.back()),
                          fmt_num(mc), fmt_num(me),
                          fmt_num(static_cast<double>(hi - lo))});
    bucket_conds.push_back(mc);
    bucket_errors.push_back(me);
  }
  const double rho = spearman(bucket_conds, bucket_errors);

  result.files.push_back(std::move(bucket_table));
  result.files.push_back(std::move(per_trial));
  result.summary = {
      {"trials", static_cast<double>(spec.trials)},
      {"buckets", static_cast<double>(bucket_conds.size())},
      {"spearman_cond_vs_error", rho},
  };
  return result;
}

namespace {

struct FloodLinkRow {
  int cycle = 0;
  LinkEstimate link;
  double h_p2p_db = 0.0;
};

// Noise-free single-sender probe of one link, the simulator-side stand-in
// for a point-to-point estimation pass.
double p2p_probe_db(const NetworkTopology& topo, int sender, int receiver) {
  const RadioModel ideal = RadioModel::ideal();
  const std::vector<double> gains = {topo.gains.linear(sender, receiver)};
  const std::vector<double> tx = {0.0};
  const double rx = distorted_received_mw(gains, tx, ideal).value;
  return mw_to_dbm_raw(rx);  // 0 dBm probe: received dBm equals the gain in dB
}

}  // namespace

ScenarioResult run_flood_ige(const ScenarioSpec& spec) {
  ScenarioResult result;
  result.name = spec.name;
  result.kind = spec.kind;
  if (!spec.topology) throw ConfigError("flood ige: topology required");

  std::vector<FloodLinkRow> rows;
  CsvTable log_table;
  log_table.name = "measurement_log";
  log_table.header = {"cycle", "round", "slot", "node", "rx_dbm"};
  CsvTable overhead_table;
  overhead_table.name = "overhead";
  overhead_table.header = {"cycle", "node", "op", "bytes", "bytes_per_round"};

  double plan_bytes = 0.0, report_bytes = 0.0;
  for (int trial = 0; trial < spec.trials; ++trial) {
    Rng rng(trial_seed(spec.seed, static_cast<std::uint64_t>(trial)));
    FloodSimulator sim(*spec.topology, spec.model, spec.flood);
    for (int cycle = 0; cycle < spec.flood.cycles; ++cycle) {
      const auto schedules =
          per_hop_schedules(sim.hops(), spec.schedule.vectors,
                            spec.schedule.level_set_dbm, spec.schedule.candidates,
                            rng, spec.schedule.initiator_level_dbm);
      CycleResult cr = sim.run_ige_cycle(schedules, rng, cycle);
      for (const auto& w : cr.report.warnings) {
        result.warnings.push_back("cycle " + std::to_string(cycle) + ": " + w);
      }
      for (const auto& link : cr.report.links) {
        rows.push_back({cycle, link, p2p_probe_db(*spec.topology, link.sender, link.receiver)});
      }
      if (trial == 0) {
        for (const auto& e : cr.log.entries()) {
          log_table.add_row({fmt_num(cycle), fmt_num(e.round), fmt_num(e.slot),
                             fmt_num(e.node), fmt_num(e.rx_dbm)});
        }
      }
      for (const auto& rec : cr.overhead) {
        overhead_table.add_row(
            {fmt_num(rec.cycle), fmt_num(rec.node), rec.op, fmt_num(rec.bytes),
             fmt_num(static_cast<double>(rec.bytes) / spec.flood.update_period_rounds)});
        (rec.op == "plan" ? plan_bytes : report_bytes) += rec.bytes;
      }
    }
  }

  CsvTable link_table;
  link_table.name = "link_report";
  link_table.header = {"cycle",    "sender",   "receiver",    "hop",
                       "h_true_db", "h_p2p_db", "h_est_db",    "error_db",
                       "cond_number", "residual_mw"};
  std::vector<double> errors;
  std::vector<double> small_gain_margins;
  double max_gain_db = -std::numeric_limits<double>::infinity();
  for (const auto& row : rows) {
    if (row.link.h_true_db) max_gain_db = std::max(max_gain_db, *row.link.h_true_db);
  }
  for (const auto& row : rows) {
    const auto& l = row.link;
    link_table.add_row({fmt_num(row.cycle), fmt_num(l.sender), fmt_num(l.receiver),
                        fmt_num(l.hop), fmt_num(l.h_true_db.value_or(0.0)),
                        fmt_num(row.h_p2p_db), fmt_num(l.h_est_db),
                        fmt_num(l.error_db.value_or(0.0)), fmt_num(l.cond_number),
                        fmt_num(l.residual_mw)});
    if (l.error_db) {
      errors.push_back(*l.error_db);
      if (*l.error_db > 3.0 && l.h_true_db) {
        small_gain_margins.push_back(max_gain_db - *l.h_true_db);
      }
    }
  }

  const double frac3 = fraction_below(errors, 3.0);
  double frac_small = 1.0;  // vacuously fine when no link errs above 3 dB
  if (!small_gain_margins.empty()) {
    std::size_t c = 0;
    for (double m : small_gain_margins) {
      if (m >= 10.0) ++c;
    }
    frac_small = static_cast<double>(c) / static_cast<double>(small_gain_margins.size());
  }
  std::vector<double> conds;
  for (const auto& row : rows) conds.push_back(row.link.cond_number);

  result.files.push_back(std::move(link_table));
  result.files.push_back(cdf_table("error_cdf", "error_db", errors));
  result.files.push_back(cdf_table("small_gain_margin_cdf", "below_max_gain_db",
                                   small_gain_margins));
  result.files.push_back(std::move(log_table));
  result.files.push_back(std::move(overhead_table));
  result.summary = {
      {"cycles", static_cast<double>(spec.flood.cycles * spec.trials)},
      {"links", static_cast<double>(rows.size())},
      {"err_frac_below_3db", frac3},
      {"large_error_small_gain_frac", frac_small},
      {"mean_cond", conds.empty() ? 0.0 : mean(conds)},
      {"plan_bytes", plan_bytes},
      {"report_bytes", report_bytes},
  };
  return result;
}

ScenarioResult run_vector_count_sweep(const ScenarioSpec& spec, TrialMode mode) {
  ScenarioResult result;
  result.name = spec.name;
  result.kind = spec.kind;
  if (!spec.topology) throw ConfigError("vector sweep: topology required");

  CsvTable box;
  box.name = "error_boxplot";
  box.header = {"vector_count", "q1_db", "median_db", "q3_db",
                "whisker_lo_db", "whisker_hi_db", "iqr_db", "samples"};

  std::map<int, double> iqr_by_count;
  for (int m : spec.vec_sweep.vector_counts) {
    FloodConfig flood = spec.flood;
    flood.rounds_per_ige = m * spec.vec_sweep.repeats_per_row;
    auto one_trial = [&](int, std::uint64_t seed) {
      Rng rng(seed);
      FloodSimulator sim(*spec.topology, spec.model, flood);
      std::map<int, PowerSchedule> schedules;
      for (int attempt = 0;; ++attempt) {
        try {
          schedules = per_hop_schedules(sim.hops(), m, spec.schedule.level_set_dbm,
                                        spec.schedule.candidates, rng,
                                        spec.schedule.initiator_level_dbm);
          break;
        } catch (const ConfigError&) {
          if (attempt > 1000) throw;  // small candidate pools may miss full rank
        }
      }
      std::vector<double> errors;
      CycleResult cr = sim.run_ige_cycle(schedules, rng, 0);
      for (const auto& link : cr.report.links) {
        if (link.error_db) errors.push_back(*link.error_db);
      }
      return errors;
    };
    const std::uint64_t count_seed = splitmix64(spec.seed ^ static_cast<std::uint64_t>(m) * 0x9E3779B97F4A7C15ull);
    const auto per_trial = run_trials<std::vector<double>>(spec.trials, count_seed, one_trial, mode);
    std::vector<double> errors;
    for (const auto& t : per_trial) errors.insert(errors.end(), t.begin(), t.end());
    if (errors.empty()) throw Error("vector sweep: no scored links");
    const BoxStats b = box_stats(errors);
    box.add_row({fmt_num(m), fmt_num(b.q1), fmt_num(b.median), fmt_num(b.q3),
                 fmt_num(b.whisker_lo), fmt_num(b.whisker_hi), fmt_num(b.q3 - b.q1),
                 fmt_num(static_cast<double>(errors.size()))});
    iqr_by_count[m] = b.q3 - b.q1;
  }

  // Reference generator statistics for 2-sender, 4-vector schedules over the
  // stock level set.
  std::vector<double> gen_conds;
  Rng gen_rng(splitmix64(spec.seed ^ 0x67656e32ULL));
  for (int i = 0; i < 200; ++i) {
    gen_conds.push_back(condition_number(
        generate_schedule(2, 4, default_level_set_dbm(), 1000, gen_rng)));
  }

  result.files.push_back(std::move(box));
  result.summary = {
      {"trials_per_count", static_cast<double>(spec.trials)},
      {"gen_mean_cond_4x2", mean(gen_conds)},
  };
  for (const auto& [m, iqr] : iqr_by_count) {
    result.summary.emplace_back("iqr_at_" + std::to_string(m), iqr);
  }
  return result;
}

ScenarioResult run_scenario(const ScenarioSpec& spec, TrialMode mode) {
  validate_scenario(spec);
  switch (spec.kind) {
    case ScenarioKind::linearity_study: return run_linearity_study(spec);
    case ScenarioKind::controlled_ige: return run_controlled_ige(spec, mode);
    case ScenarioKind::condition_number_sweep: return run_condition_number_sweep(spec, mode);
    case ScenarioKind::flood_ige: return run_flood_ige(spec);
    case ScenarioKind::vector_count_sweep: return run_vector_count_sweep(spec, mode);
  }
  throw ConfigError("run_scenario: unhandled kind");
}

}  // namespace igesim
