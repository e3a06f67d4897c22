#include "igesim/topology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "igesim/errors.hpp"

namespace igesim {

std::vector<int> assign_hops(const NetworkTopology& topology) {
  const int n = topology.nodes();
  if (topology.initiator < 0 || topology.initiator >= n) {
    throw TopologyError("assign_hops: initiator id out of range");
  }
  std::vector<int> hop(static_cast<std::size_t>(n), -1);
  hop[static_cast<std::size_t>(topology.initiator)] = 0;
  std::deque<int> frontier{topology.initiator};
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop_front();
    for (int v = 0; v < n; ++v) {
      if (v == u || hop[static_cast<std::size_t>(v)] >= 0) continue;
      if (topology.decodable(u, v)) {
        hop[static_cast<std::size_t>(v)] = hop[static_cast<std::size_t>(u)] + 1;
        frontier.push_back(v);
      }
    }
  }
  for (int v = 0; v < n; ++v) {
    if (hop[static_cast<std::size_t>(v)] < 0) {
      throw TopologyError("assign_hops: node " + std::to_string(v) +
                          " unreachable from the initiator");
    }
  }
  return hop;
}

void NetworkTopology::validate() const { (void)assign_hops(*this); }

NetworkTopology topology_from_positions(const std::vector<std::pair<double, double>>& pos_m,
                                        const PathLossParams& params, int initiator,
                                        double rx_sensitivity_dbm, Rng& rng) {
  const int n = static_cast<int>(pos_m.size());
  NetworkTopology topo;
  topo.gains = ChannelGainMatrix(n);
  topo.initiator = initiator;
  topo.rx_sensitivity_dbm = rx_sensitivity_dbm;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double dx = pos_m[i].first - pos_m[j].first;
      const double dy = pos_m[i].second - pos_m[j].second;
      const double d = std::max(std::hypot(dx, dy), 0.01);
      double loss = params.ref_loss_db +
                    10.0 * params.exponent * std::log10(d / params.ref_distance_m);
      if (params.shadowing_sigma_db > 0.0) {
        loss += rng.normal(params.shadowing_sigma_db);
      }
      const double gain_db = std::min(-loss, 0.0);
      topo.gains.set_db(i, j, gain_db);
      topo.gains.set_db(j, i, gain_db);
    }
  }
  return topo;
}

}  // namespace igesim
