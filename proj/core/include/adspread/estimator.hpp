#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "adspread/channels.hpp"
#include "adspread/diffusion.hpp"

namespace adspread {

struct EstimatorConfig {
  std::uint64_t replications = 10'000;
  std::uint64_t seed = 0;
  unsigned workers = 0;             // 0 = resolve_workers()
  bool per_node = false;            // collect per-node purchase probabilities
};

/// Spread of every product over Real nodes. Sums are accumulated as integers,
/// so results do not depend on how replications were split across workers.
struct SpreadEstimate {
  std::uint64_t replications = 0;
  std::size_t real_nodes = 0;
  std::vector<double> mean;    // per product
  std::vector<double> std_error;  // per product (sample std / sqrt(R))
  /// count_sum[p] = total purchases of p over all replications.
  std::vector<std::uint64_t> count_sum;
  /// node_hits[v * P + p] = replications in which Real node v bought p
  /// (empty unless per_node was requested).
  std::vector<std::uint64_t> node_hits;

  double probability(NodeId v, std::size_t product) const;
};

/// Replication r uses StreamKey{config.seed, r} for thresholds and tie-breaks.
SpreadEstimate estimate_spread(const Network& net, const ProductSet& products,
                               const SeedAssignment& seeds, const EstimatorConfig& config);

SpreadEstimate estimate_spread(const AugmentedNetwork& augmented, const ProductSet& products,
                               const EstimatorConfig& config);

/// Fraction of replications in which Real node v buys `product`.
double estimate_node_probability(const AugmentedNetwork& augmented, const ProductSet& products,
                                 NodeId v, std::size_t product, const EstimatorConfig& config);

}  // namespace adspread
