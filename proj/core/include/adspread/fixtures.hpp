#pragma once

// Small hand-built instances: the two-product geometric example and the
// non-monotonicity example. Both use orthogonal products p = (1, 0) and
// q = (0, 1) and contain no randomness.

#include <filesystem>
#include <vector>

#include "adspread/channels.hpp"
#include "adspread/diffusion.hpp"

namespace adspread {

struct Fixture {
  Network net;
  ProductSet products;
  std::vector<ChannelPlan> plans;  // seed-only plans, horizon 0
  SeedAssignment seeds() const;
};

namespace fig2 {
inline constexpr NodeId kSeedP = 0;
inline constexpr NodeId kSeedQ = 1;
inline constexpr NodeId kU = 2;
inline constexpr NodeId kW = 3;
inline constexpr NodeId kV = 4;
}  // namespace fig2

namespace fig3 {
inline constexpr NodeId kSeedP = 0;
inline constexpr NodeId kSeedQ = 1;
inline constexpr NodeId kU = 2;
inline constexpr NodeId kA = 3;
inline constexpr NodeId kV = 4;
inline constexpr NodeId kSureFirst = 5;   // the two weight-1 successors of kSeedP
inline constexpr NodeId kSinkFirst = 7;   // 30 followers of kV
inline constexpr std::size_t kSinks = 30;
inline constexpr std::size_t kNodes = 37;
}  // namespace fig3

/// v (node 4) hears 0.4p + 0.2q directly from the seeds and 0.1p + 0.2q one
/// step later through u and w.
Fixture make_fig2();

/// with_u = false seeds {0} for p, {1} for q; with_u = true adds u to p's seeds.
Fixture make_fig3(bool with_u = false);

/// Orthogonal unit products p = (1, 0), q = (0, 1) with null feature 1.
ProductSet orthogonal_products();

/// Writes fig2/ and fig3/ (network.txt, similarity.txt, products.txt,
/// plans.json; fig3 also plans_tp.json for the enlarged seed set).
/// Output is byte-identical across runs.
void generate_fixtures(const std::filesystem::path& out_dir);

}  // namespace adspread
