#pragma once

// Competitive multi-feature linear threshold diffusion.
//
// Node v, still uninfluenced after step t-1, becomes influenced at step t when
// the norm of its aggregate vector (the weighted sum of the unit product
// vectors bought by in-neighbours influenced by the end of t-1) reaches its
// threshold. It then buys the product closest in angle to that aggregate.
// All activations of a step are decided from the previous step's state.

#include <cstdint>
#include <span>
#include <vector>

#include "adspread/feature_space.hpp"
#include "adspread/network.hpp"
#include "adspread/random.hpp"

namespace adspread {

/// Relative slack on the activation comparison. Pseudonode gadgets sit exactly
/// on ||aggregate|| == threshold, which rounding must not push below.
inline constexpr double kActivationRelTolerance = 1e-14;

inline bool reaches_threshold(double aggregate_norm, double threshold) noexcept {
  return aggregate_norm > 0.0 && aggregate_norm >= threshold * (1.0 - kActivationRelTolerance);
}

enum class ThresholdKind : std::uint8_t { RandomUniform, Fixed };

struct ThresholdAssignment {
  std::vector<double> values;
  std::vector<ThresholdKind> kinds;
};

/// Threshold of a single node in replication `key`: Uniform[0,1) for Real
/// nodes, the construction-time value for pseudonodes.
double node_threshold(const Network& net, NodeId v, StreamKey key);

ThresholdAssignment sample_thresholds(const Network& net, StreamKey key);

/// Seed sets per product id. Product roots are seeded implicitly and need not
/// be listed.
struct SeedAssignment {
  std::vector<std::vector<NodeId>> by_product;

  /// Throws Error(Config) on out-of-range ids, overlaps between products, or
  /// seeds that are neither Real nodes nor the product's own root.
  void check(const Network& net, std::size_t product_count) const;
};

struct DiffusionOutcome {
  std::vector<std::int32_t> activation_time;  // -1 when never influenced
  std::vector<std::int32_t> purchased;        // product id, -1 when never influenced
  std::int32_t steps = 0;                     // last step at which something activated

  /// Real nodes (ids below `real_nodes`) that bought `product`.
  std::size_t count(std::size_t product, std::size_t real_nodes) const;
};

/// Snapshot after `time` steps. `aggregate` holds, per node, the vector that
/// node evaluated at `time` (built from nodes influenced by the end of time-1),
/// flattened as node_count x dimension.
struct DiffusionState {
  std::int32_t time = 0;
  std::vector<std::int32_t> activation_time;
  std::vector<std::int32_t> purchased;
  std::vector<double> aggregate;

  bool influenced(NodeId v) const { return activation_time[v] >= 0; }
};

/// Time-0 state: seeds and product roots influenced, buying their product.
DiffusionState initial_state(const Network& net, const ProductSet& products,
                             const SeedAssignment& seeds);

/// One synchronous step computed from scratch. Nodes are visited in `order`
/// (all nodes ascending if empty); the result does not depend on it.
DiffusionState step(const Network& net, const ProductSet& products, const DiffusionState& state,
                    const ThresholdAssignment& thresholds, StreamKey tie_key,
                    std::span<const NodeId> order = {});

/// Default step budget: node count plus the longest media chain plus 2.
std::int32_t default_max_steps(const Network& net);

/// Event-driven engine. One instance per worker; buffers are reused across
/// replications. The network and products must outlive the engine.
class DiffusionEngine {
 public:
  DiffusionEngine(const Network& net, const ProductSet& products);
  DiffusionEngine(Network&&, const ProductSet&) = delete;
  DiffusionEngine(const Network&, ProductSet&&) = delete;

  /// Thresholds drawn from `key` (identical to sample_thresholds(net, key)).
  const DiffusionOutcome& run(const SeedAssignment& seeds, StreamKey key, std::int32_t max_steps = 0);
  /// Explicit thresholds; tie-breaks still come from `key`.
  const DiffusionOutcome& run(const SeedAssignment& seeds, const ThresholdAssignment& thresholds,
                              StreamKey key, std::int32_t max_steps = 0);

 private:
  template <typename ThresholdFn>
  const DiffusionOutcome& run_impl(const SeedAssignment& seeds, ThresholdFn&& threshold,
                                   StreamKey key, std::int32_t max_steps);

  const Network* net_;
  const ProductSet* products_;
  std::size_t dim_;
  std::vector<NodeId> roots_;
  std::vector<int> root_product_;
  DiffusionOutcome outcome_;
  std::vector<double> aggregate_;
  std::vector<double> threshold_;
  std::vector<std::uint8_t> touched_flag_;
  std::vector<NodeId> dirty_;
  std::vector<NodeId> frontier_;
  std::vector<NodeId> next_frontier_;
  std::vector<NodeId> touched_;
};

/// Runs to a fixed point. Throws Error(Internal) if `max_steps` (0 = default)
/// elapse with activations still happening.
DiffusionOutcome run_diffusion(const Network& net, const ProductSet& products,
                               const SeedAssignment& seeds, const ThresholdAssignment& thresholds,
                               StreamKey tie_key, std::int32_t max_steps = 0);

/// CSV `node,activation_time,product` for every node.
std::string format_trajectory(const DiffusionOutcome& outcome);

}  // namespace adspread
