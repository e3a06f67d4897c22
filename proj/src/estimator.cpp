#include "igesim/estimator.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "igesim/errors.hpp"

namespace igesim {

GainSolution solve_gains(const PowerSchedule& schedule, std::span<const double> rx_mw) {
  if (static_cast<int>(rx_mw.size()) != schedule.rounds) {
    throw std::invalid_argument("solve_gains: rx length must equal schedule rows");
  }
  if (!is_full_rank(schedule)) {
    throw UnsolvableError("solve_gains: schedule is rank-deficient");
  }
  const auto mw = schedule.matrix_mw();
  Eigen::MatrixXd p(schedule.rounds, schedule.senders);
  for (int r = 0; r < schedule.rounds; ++r) {
    for (int c = 0; c < schedule.senders; ++c) {
      p(r, c) = mw[static_cast<std::size_t>(r) * schedule.senders + c];
    }
  }
  Eigen::VectorXd y(schedule.rounds);
  for (int r = 0; r < schedule.rounds; ++r) y(r) = rx_mw[static_cast<std::size_t>(r)];

  // QR keeps the conditioning of P itself, unlike the normal equations.
  const Eigen::VectorXd h = p.colPivHouseholderQr().solve(y);
  GainSolution sol;
  sol.residual_norm = (p * h - y).norm();
  sol.gains.resize(static_cast<std::size_t>(schedule.senders));
  for (int c = 0; c < schedule.senders; ++c) {
    if (h(c) < 0.0) {
      sol.gains[static_cast<std::size_t>(c)] = 0.0;
      sol.clamped = true;
    } else {
      sol.gains[static_cast<std::size_t>(c)] = h(c);
    }
  }
  return sol;
}

SubtractResult subtract_interference(double total_mw, double known_mw) {
  if (total_mw < 0.0 || known_mw < 0.0) {
    throw std::invalid_argument("subtract_interference: negative power");
  }
  if (known_mw > total_mw) return {0.0, true};
  return {total_mw - known_mw, false};
}

RowMeans average_repeats(std::span<const double> per_round_mw, int period) {
  if (period < 1) throw std::invalid_argument("average_repeats: period must be >= 1");
  const int rounds = static_cast<int>(per_round_mw.size());
  const int complete = rounds / period;
  if (complete == 0) {
    std::vector<int> missing;
    for (int r = rounds; r < period; ++r) missing.push_back(r);
    throw IncompleteDataError("average_repeats: fewer rounds than schedule rows",
                              std::move(missing));
  }
  RowMeans out;
  out.repeats = complete;
  out.dropped_rounds = rounds - complete * period;
  out.mean_mw.assign(static_cast<std::size_t>(period), 0.0);
  for (int rep = 0; rep < complete; ++rep) {
    for (int row = 0; row < period; ++row) {
      out.mean_mw[static_cast<std::size_t>(row)] +=
          per_round_mw[static_cast<std::size_t>(rep) * period + row];
    }
  }
  for (auto& v : out.mean_mw) v /= complete;
  return out;
}

std::map<int, RowMeans> average_repeats(const MeasurementLog& log, int period,
                                        int slot, int rounds) {
  std::set<int> nodes;
  for (const auto& e : log.entries()) {
    if (e.slot == slot && e.round < rounds) nodes.insert(e.node);
  }
  std::map<int, RowMeans> out;
  for (int node : nodes) {
    std::vector<double> series;
    std::vector<int> gaps;
    series.reserve(static_cast<std::size_t>(rounds));
    for (int r = 0; r < rounds; ++r) {
      const auto dbm = log.find_dbm(r, slot, node);
      if (!dbm) {
        gaps.push_back(r % period);
        series.push_back(0.0);
        continue;
      }
      series.push_back(dbm_to_mw(*dbm));
    }
    if (!gaps.empty()) {
      throw IncompleteDataError("average_repeats: missing rounds for node " +
                                    std::to_string(node),
                                std::move(gaps));
    }
    out.emplace(node, average_repeats(series, period));
  }
  return out;
}

double gain_error_db(double h_est_linear, double h_true_linear) {
  if (!(h_true_linear > 0.0)) {
    throw std::domain_error("gain_error_db: true gain must be > 0");
  }
  if (h_est_linear <= 0.0) return std::numeric_limits<double>::infinity();
  return std::abs(linear_gain_to_db(h_est_linear) - linear_gain_to_db(h_true_linear));
}

CsvTable EstimationReport::to_csv() const {
  CsvTable t;
  t.name = "link_report";
  t.header = {"sender",   "receiver", "hop",         "h_true_db",
              "h_est_db", "error_db", "cond_number", "residual_mw"};
  for (const auto& l : links) {
    t.add_row({fmt_num(l.sender), fmt_num(l.receiver), fmt_num(l.hop),
               l.h_true_db ? fmt_num(*l.h_true_db) : "",
               fmt_num(l.h_est_db), l.error_db ? fmt_num(*l.error_db) : "",
               fmt_num(l.cond_number), fmt_num(l.residual_mw)});
  }
  return t;
}

void EstimationReport::score_against(const ChannelGainMatrix& truth) {
  for (auto& link : links) {
    const double h_true = truth.linear(link.sender, link.receiver);
    if (h_true > 0.0) {
      link.h_true_db = linear_gain_to_db(h_true);
      link.error_db = gain_error_db(link.h_est_linear, h_true);
    }
  }
}

EstimationReport estimate_hopwise(const MeasurementLog& log,
                                  const std::map<int, PowerSchedule>& hop_schedules,
                                  const std::vector<int>& hop_of_node,
                                  const Baselines& baselines,
                                  const HopRoundPlan& plan,
                                  int packet_slots) {
  EstimationReport report;
  report.dropped_rounds = plan.dropped_rounds;

  std::map<int, std::vector<int>> members;
  for (int node = 0; node < static_cast<int>(hop_of_node.size()); ++node) {
    members[hop_of_node[node]].push_back(node);
  }

  for (const auto& [hop, senders] : members) {
    auto next = members.find(hop + 1);
    if (next == members.end()) continue;  // no downstream links from the last hop
    auto sched_it = hop_schedules.find(hop);
    if (sched_it == hop_schedules.end()) {
      report.warnings.push_back("hop " + std::to_string(hop) + ": no schedule");
      continue;
    }
    const PowerSchedule& schedule = sched_it->second;
    if (schedule.senders != static_cast<int>(senders.size())) {
      report.warnings.push_back("hop " + std::to_string(hop) +
                                ": schedule width does not match hop size");
      continue;
    }
    try {
      const auto& rows = plan.rows_by_hop.at(hop);
      const auto& counted = plan.counted_rounds_by_hop.at(hop);
      const int total_slot = hop * packet_slots + 1;
      const double cond = condition_number(schedule);
      report.cond_by_hop[hop] = cond;

      for (int receiver : next->second) {
        std::vector<double> sums(static_cast<std::size_t>(schedule.rounds), 0.0);
        std::vector<int> counts(static_cast<std::size_t>(schedule.rounds), 0);
        auto base_it = baselines.find(receiver);
        for (int round : counted) {
          const double total = log.at_mw(round, total_slot, receiver);
          double base = 0.0;
          if (base_it != baselines.end() &&
              round < static_cast<int>(base_it->second.size())) {
            base = base_it->second[static_cast<std::size_t>(round)];
          }
          const int row = rows[static_cast<std::size_t>(round)];
          sums[static_cast<std::size_t>(row)] += subtract_interference(total, base).mw;
          counts[static_cast<std::size_t>(row)] += 1;
        }
        std::vector<int> gaps;
        for (int row = 0; row < schedule.rounds; ++row) {
          if (counts[static_cast<std::size_t>(row)] == 0) gaps.push_back(row);
        }
        if (!gaps.empty()) {
          throw IncompleteDataError("hop " + std::to_string(hop) +
                                        ": schedule rows without measurements",
                                    std::move(gaps));
        }
        std::vector<double> y(static_cast<std::size_t>(schedule.rounds));
        for (int row = 0; row < schedule.rounds; ++row) {
          y[static_cast<std::size_t>(row)] =
              sums[static_cast<std::size_t>(row)] / counts[static_cast<std::size_t>(row)];
        }
        const GainSolution sol = solve_gains(schedule, y);
        for (std::size_t c = 0; c < senders.size(); ++c) {
          LinkEstimate link;
          link.sender = senders[c];
          link.receiver = receiver;
          link.hop = hop;
          link.h_est_linear = sol.gains[c];
          link.h_est_db = linear_gain_to_db(sol.gains[c]);
          link.cond_number = cond;
          link.residual_mw = sol.residual_norm;
          link.clamped = sol.clamped;
          report.links.push_back(link);
        }
      }
    } catch (const Error& e) {
      report.warnings.push_back("hop " + std::to_string(hop) + " failed: " + e.what());
    }
  }
  return report;
}

}  // namespace igesim
