#pragma once

// Exact spread on small instances, used as ground truth for the Monte Carlo
// engine.
//
// A node's activation depends on its threshold only through comparisons with
// the (non-decreasing) norms of its aggregate vector. The enumeration
// therefore branches lazily: whenever an uninfluenced node sees a new norm it
// either activates (threshold in the newly covered interval) or not, and each
// branch carries its conditional probability. Purchase ties branch over the
// tied products with equal weight. Averaging over all m^n grid tuples is the
// same sum grouped by region, so the grid variant reproduces brute-force
// enumeration exactly while visiting far fewer states.

#include <cstdint>
#include <vector>

#include "adspread/diffusion.hpp"

namespace adspread {

/// Thresholds at the midpoints (i - 0.5) / m, i = 1..m, independently per node.
struct GridSpec {
  int resolution = 64;
  std::uint64_t max_branches = std::uint64_t{1} << 24;  // leaf budget of the region enumeration
};

/// Brute-force enumeration is limited to n * log2(m) <= 24 bits.
inline constexpr double kBruteForceBits = 24.0;

enum class ThresholdLaw { Grid, Continuous };

struct ExactSpread {
  std::vector<double> spread;      // per product, Real nodes only
  std::vector<double> node_prob;   // node_prob[v * P + p] for Real v
  std::uint64_t leaves = 0;        // terminal branches visited

  double probability(NodeId v, std::size_t product) const {
    return node_prob[v * spread.size() + product];
  }
};

/// Exact average over the midpoint grid. Throws Error(Config) when the
/// branch budget is exceeded.
ExactSpread exact_spread_grid(const Network& net, const ProductSet& products, const SeedAssignment& seeds,
                              const GridSpec& grid);

/// Exact expectation under i.i.d. Uniform[0,1] thresholds.
ExactSpread exact_spread_regions(const Network& net, const ProductSet& products, const SeedAssignment& seeds,
                                 std::uint64_t max_branches = std::uint64_t{1} << 24);

/// Runs the diffusion engine on every one of the m^n grid tuples of the Real
/// nodes. Requires tie-free instances. Throws Error(Config) beyond the cap.
std::vector<double> brute_force_spread_grid(const Network& net, const ProductSet& products,
                                            const SeedAssignment& seeds, const GridSpec& grid);

enum class Fig3Variant { BaseSeeds, WithU };

struct Fig3Analytic {
  double p_a_q = 0.0;    // probability a buys q
  double p_v_p = 0.0;    // probability v buys p
  double sigma_p = 0.0;  // expected spread of p
};

/// Closed-form values for the non-monotonicity example (37-node fixture).
Fig3Analytic analytic_fig3(Fig3Variant variant);

}  // namespace adspread
