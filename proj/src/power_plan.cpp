#include "igesim/power_plan.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

#include "igesim/errors.hpp"
#include "igesim/units.hpp"

namespace igesim {

std::vector<double> default_level_set_dbm() {
  return {0.0, -4.0, -8.0, -12.0, -16.0, -20.0, -40.0};
}

std::vector<double> PowerSchedule::row_dbm(int row) const {
  return {dbm.begin() + static_cast<std::ptrdiff_t>(row) * senders,
          dbm.begin() + static_cast<std::ptrdiff_t>(row + 1) * senders};
}

std::vector<double> PowerSchedule::row_mw(int row) const {
  std::vector<double> out(senders);
  for (int c = 0; c < senders; ++c) out[c] = dbm_to_mw(at(row, c));
  return out;
}

std::vector<double> PowerSchedule::matrix_mw() const {
  std::vector<double> out(dbm.size());
  for (std::size_t i = 0; i < dbm.size(); ++i) out[i] = dbm_to_mw(dbm[i]);
  return out;
}

void PowerSchedule::validate() const {
  if (rounds < senders || senders <= 0) {
    throw ConfigError("schedule: need rounds >= senders >= 1");
  }
  if (dbm.size() != static_cast<std::size_t>(rounds) * senders) {
    throw ConfigError("schedule: matrix size mismatch");
  }
  if (!level_set_dbm.empty()) {
    for (double v : dbm) {
      const bool known = std::any_of(level_set_dbm.begin(), level_set_dbm.end(),
                                     [&](double l) { return std::abs(l - v) < 1e-9; });
      if (!known) throw ConfigError("schedule: entry not in level set");
    }
  }
  if (linear_region_only) {
    for (double v : dbm) {
      if (v > 0.0 + 1e-9) throw ConfigError("schedule: entry above linear region");
    }
  }
}

VectorRegistry::VectorRegistry(std::vector<std::vector<double>> vectors_dbm)
    : vectors_(std::move(vectors_dbm)) {
  if (vectors_.empty()) throw ConfigError("registry must not be empty");
  const std::size_t n = vectors_.front().size();
  for (const auto& v : vectors_) {
    if (v.size() != n) throw ConfigError("registry vectors must share a length");
  }
}

const std::vector<double>& VectorRegistry::vector_dbm(int index) const {
  if (index < 0 || index >= size()) {
    throw EncodingError("registry index out of range");
  }
  return vectors_[static_cast<std::size_t>(index)];
}

int VectorRegistry::find(std::span<const double> row_dbm) const {
  for (int i = 0; i < size(); ++i) {
    const auto& v = vectors_[static_cast<std::size_t>(i)];
    if (v.size() != row_dbm.size()) continue;
    bool same = true;
    for (std::size_t c = 0; c < v.size(); ++c) {
      if (std::abs(v[c] - row_dbm[c]) > 1e-9) {
        same = false;
        break;
      }
    }
    if (same) return i;
  }
  return -1;
}

VectorRegistry VectorRegistry::from_schedule_rows(const PowerSchedule& s) {
  std::vector<std::vector<double>> rows;
  VectorRegistry reg;
  for (int r = 0; r < s.rounds; ++r) {
    const auto row = s.row_dbm(r);
    bool seen = false;
    for (const auto& v : rows) {
      bool same = true;
      for (std::size_t c = 0; c < v.size(); ++c) {
        if (std::abs(v[c] - row[c]) > 1e-9) {
          same = false;
          break;
        }
      }
      if (same) {
        seen = true;
        break;
      }
    }
    if (!seen) rows.push_back(row);
  }
  return VectorRegistry(std::move(rows));
}

namespace {

Eigen::MatrixXd to_eigen_mw(int rows, int cols, std::span<const double> mw) {
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      m(r, c) = mw[static_cast<std::size_t>(r) * cols + c];
    }
  }
  return m;
}

}  // namespace

double condition_number_mw(int rows, int cols, std::span<const double> mw) {
  if (rows < cols) return std::numeric_limits<double>::infinity();
  const Eigen::MatrixXd m = to_eigen_mw(rows, cols, mw);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  if (!(smin > smax * 1e-10) || smin == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return smax / smin;
}

double condition_number(const PowerSchedule& s) {
  const auto mw = s.matrix_mw();
  return condition_number_mw(s.rounds, s.senders, mw);
}

bool is_full_rank(const PowerSchedule& s) {
  if (s.rounds < s.senders) return false;
  return std::isfinite(condition_number(s));
}

PowerSchedule generate_schedule(int senders, int rounds,
                                std::vector<double> level_set_dbm,
                                int candidates, Rng& rng) {
  if (senders < 1) throw ConfigError("generate_schedule: need at least one sender");
  if (rounds < senders) {
    throw ConfigError("generate_schedule: rounds must be >= senders");
  }
  if (level_set_dbm.size() < 2 && senders > 1) {
    throw ConfigError("generate_schedule: level set too small");
  }
  if (candidates < 1) throw ConfigError("generate_schedule: candidates must be >= 1");

  PowerSchedule best;
  double best_cond = std::numeric_limits<double>::infinity();
  PowerSchedule cand;
  cand.rounds = rounds;
  cand.senders = senders;
  cand.level_set_dbm = level_set_dbm;
  cand.dbm.resize(static_cast<std::size_t>(rounds) * senders);

  for (int k = 0; k < candidates; ++k) {
    for (auto& v : cand.dbm) {
      v = level_set_dbm[rng.uniform_index(level_set_dbm.size())];
    }
    const double cond = condition_number(cand);
    if (cond < best_cond) {
      best_cond = cond;
      best = cand;
    }
  }
  if (!std::isfinite(best_cond)) {
    throw ConfigError("generate_schedule: no full-rank candidate found; widen the level set");
  }
  for (int r = 0; r < best.rounds; ++r) best.plan_indices.push_back(r);
  return best;
}

std::vector<int> encode_plan(const PowerSchedule& s, const VectorRegistry& registry) {
  std::vector<int> indices;
  indices.reserve(static_cast<std::size_t>(s.rounds));
  for (int r = 0; r < s.rounds; ++r) {
    const auto row = s.row_dbm(r);
    const int idx = registry.find(row);
    if (idx < 0) throw EncodingError("encode_plan: schedule row not in registry");
    indices.push_back(idx);
  }
  return indices;
}

std::vector<std::vector<double>> decode_plan(std::span<const int> indices,
                                             const VectorRegistry& registry) {
  std::vector<std::vector<double>> rows;
  rows.reserve(indices.size());
  for (int idx : indices) rows.push_back(registry.vector_dbm(idx));
  return rows;
}

std::map<int, PowerSchedule> per_hop_schedules(const std::vector<int>& hop_of_node,
                                               int rounds_per_hop,
                                               const std::vector<double>& level_set_dbm,
                                               int candidates, Rng& rng,
                                               double initiator_level_dbm) {
  if (level_set_dbm.empty()) {
    throw ConfigError("per_hop_schedules: empty level set");
  }
  std::map<int, int> hop_sizes;
  for (int h : hop_of_node) {
    if (h < 0) throw ConfigError("per_hop_schedules: unassigned hop");
    ++hop_sizes[h];
  }
  std::map<int, PowerSchedule> out;
  for (const auto& [hop, size] : hop_sizes) {
    if (hop == 0 || size == 1) {
      // Constant-power column: the initiator must hold its level so later
      // hops keep a stable subtraction baseline, and a lone sender gains
      // nothing from varying (any nonzero column is already rank 1).
      const double level =
          hop == 0 ? initiator_level_dbm
                   : *std::max_element(level_set_dbm.begin(), level_set_dbm.end());
      PowerSchedule s;
      s.rounds = 1;
      s.senders = size;
      s.dbm.assign(static_cast<std::size_t>(size), level);
      s.level_set_dbm = {level};
      s.plan_indices = {0};
      out.emplace(hop, std::move(s));
      continue;
    }
    const int m = std::max(rounds_per_hop, std::max(size, 2));
    out.emplace(hop, generate_schedule(size, m, level_set_dbm, candidates, rng));
  }
  return out;
}

}  // namespace igesim
