#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "igesim/errors.hpp"
#include "igesim/units.hpp"

namespace igesim {

// One reported received power from a node that was in listen mode.
struct MeasurementEntry {
  int round = 0;
  int slot = 0;  // 1-based within the round
  int node = 0;
  double rx_dbm = 0.0;
};

// Per-node, per-slot, per-round received powers; at most one entry per
// (node, round, slot), listening nodes only.
class MeasurementLog {
 public:
  void add(int round, int slot, int node, double rx_dbm) {
    const std::uint64_t k = key(round, slot, node);
    if (index_.contains(k)) {
      throw Error("measurement log: duplicate (node, round, slot) entry");
    }
    index_.emplace(k, entries_.size());
    entries_.push_back({round, slot, node, rx_dbm});
  }

  std::optional<double> find_dbm(int round, int slot, int node) const {
    auto it = index_.find(key(round, slot, node));
    if (it == index_.end()) return std::nullopt;
    return entries_[it->second].rx_dbm;
  }

  double at_mw(int round, int slot, int node) const {
    const auto dbm = find_dbm(round, slot, node);
    if (!dbm) {
      throw IncompleteDataError("measurement log: missing entry", {round});
    }
    return dbm_to_mw(*dbm);
  }

  const std::vector<MeasurementEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  std::size_t count_for_node(int node) const {
    std::size_t c = 0;
    for (const auto& e : entries_) {
      if (e.node == node) ++c;
    }
    return c;
  }

 private:
  static std::uint64_t key(int round, int slot, int node) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(round)) << 32) ^
           (static_cast<std::uint64_t>(static_cast<std::uint16_t>(slot)) << 16) ^
           static_cast<std::uint64_t>(static_cast<std::uint16_t>(node));
  }

  std::vector<MeasurementEntry> entries_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

}  // namespace igesim
