#pragma once

#include <vector>

#include "igesim/gain_matrix.hpp"
#include "igesim/rng.hpp"

namespace igesim {

// Static network under study: ground-truth gains plus the flooding root.
struct NetworkTopology {
  ChannelGainMatrix gains;
  int initiator = 0;
  double rx_sensitivity_dbm = -90.0;  // decode threshold

  int nodes() const { return gains.nodes(); }
  // A link is decodable when a lone sender at the reference level (0 dBm)
  // arrives at or above the sensitivity.
  bool decodable(int from, int to) const {
    return gains.db(from, to) >= rx_sensitivity_dbm;
  }
  void validate() const;  // throws TopologyError when a node is unreachable
};

// Breadth-first hop indices over the decodability graph; initiator is hop 0.
std::vector<int> assign_hops(const NetworkTopology& topology);

// Log-distance path loss for generating gain matrices from 2-D coordinates:
// loss(d) = ref_loss + 10 * exponent * log10(d / ref_distance) [+ shadowing].
struct PathLossParams {
  double ref_loss_db = 40.0;
  double ref_distance_m = 1.0;
  double exponent = 3.0;
  double shadowing_sigma_db = 0.0;  // one symmetric draw per node pair
};

NetworkTopology topology_from_positions(const std::vector<std::pair<double, double>>& pos_m,
                                        const PathLossParams& params, int initiator,
                                        double rx_sensitivity_dbm, Rng& rng);

}  // namespace igesim
