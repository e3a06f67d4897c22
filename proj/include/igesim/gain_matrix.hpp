#pragma once

#include <vector>

#include "igesim/errors.hpp"
#include "igesim/units.hpp"

namespace igesim {

// Ground-truth channel gains between all node pairs, linear scale in [0, 1].
// Entry (from, to) is the fraction of transmitted power that arrives at the
// receiver; the diagonal is ignored by every consumer.
class ChannelGainMatrix {
 public:
  ChannelGainMatrix() = default;
  explicit ChannelGainMatrix(int nodes)
      : n_(nodes), h_(static_cast<std::size_t>(nodes) * nodes, 0.0) {
    if (nodes <= 0) throw ConfigError("gain matrix needs at least one node");
  }

  int nodes() const { return n_; }

  double linear(int from, int to) const { return h_[idx(from, to)]; }

  double db(int from, int to) const { return linear_gain_to_db(linear(from, to)); }

  void set_linear(int from, int to, double h) {
    if (!(h >= 0.0) || h > 1.0) {
      throw ConfigError("channel gain must lie in [0, 1]");
    }
    h_[idx(from, to)] = h;
  }

  void set_db(int from, int to, double h_db) {
    set_linear(from, to, db_to_linear_gain(h_db));
  }

  // Rows are senders, columns receivers. Non-finite entries mean "no link".
  static ChannelGainMatrix from_db(const std::vector<std::vector<double>>& db) {
    const int n = static_cast<int>(db.size());
    ChannelGainMatrix m(n);
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(db[i].size()) != n) {
        throw ConfigError("gain matrix must be square");
      }
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        if (std::isfinite(db[i][j])) m.set_db(i, j, db[i][j]);
      }
    }
    return m;
  }

 private:
  std::size_t idx(int from, int to) const {
    if (from < 0 || from >= n_ || to < 0 || to >= n_) {
      throw ConfigError("gain matrix index out of range");
    }
    return static_cast<std::size_t>(from) * n_ + to;
  }

  int n_ = 0;
  std::vector<double> h_;
};

}  // namespace igesim
