#pragma once

// Embeds mass-media and social-advertising channels into a network.
//
// Each product p gets a root pseudonode (influenced at time 0, buying p) that
// heads a media chain p(1) -> p(2) -> ... -> p(T) of weight-1 edges, so p(t)
// is influenced at t-1 and its edge into a Real node v delivers the scaled
// mass-media weight at step t. A social advertisement for edge (u, v) is an
// intermediary pseudonode w fed by the root (weight chi_w - eps) and by u
// (weight eps): w reaches its threshold only when u bought exactly p, then
// passes the scaled recommendation weight on to v.

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "adspread/diffusion.hpp"
#include "adspread/feature_space.hpp"
#include "adspread/network.hpp"

namespace adspread {

/// Marketing strategy of one product: seeds, social-ad weight alpha and the
/// mass-media schedule beta_1..beta_T (horizon T = beta.size()).
struct ChannelPlan {
  int product = 0;
  std::vector<NodeId> seeds;
  double alpha = 0.0;
  std::vector<double> beta;

  std::size_t horizon() const noexcept { return beta.size(); }
  double beta_total() const;
  friend bool operator==(const ChannelPlan&, const ChannelPlan&) = default;
};

struct GadgetOptions {
  double gadget_threshold = 0.5;  // chi_w
  double gadget_epsilon = 0.25;   // eps, 0 < eps < chi_w
  double media_threshold = 0.5;   // fixed threshold of chain nodes
};

/// Ratio mapping nominal channel weights to edge weights into Real node v:
/// (1 - sum_u b_uv) / sum_p (sum_{u in N(v)} alpha^p h_uv + sum_t beta_t^p),
/// or 0 when the denominator vanishes.
double scaling_ratio(const Network& base, NodeId v, std::span<const ChannelPlan> plans);

struct AugmentedNetwork {
  Network net;
  std::size_t real_nodes = 0;
  std::vector<double> scale_factors;          // per Real node
  std::vector<NodeId> product_roots;          // per product id
  std::vector<std::vector<NodeId>> media_chains;  // per product: p(1) (= root) .. p(T')
  std::size_t horizon = 0;

  /// Seeds of every plan plus nothing else; roots are implicit.
  SeedAssignment seeds;

  std::vector<NodeId> gadgets() const;
};

/// Stepwise construction of an AugmentedNetwork; build_augmented() drives it.
class AugmentationBuilder {
 public:
  AugmentationBuilder(const Network& base, const ProductSet& products,
                      std::span<const ChannelPlan> plans, const GadgetOptions& options = {});

  /// Pseudoedges p(t) -> v with weight ratio(v) * beta_t for every beta_t > 0.
  void attach_mass_media(int product, NodeId v);
  /// Gadget for edge (u, v); skipped when alpha, h_uv or ratio(v) is zero.
  /// Returns the gadget id, or kNoNode when skipped.
  NodeId attach_social_gadget(int product, NodeId u, NodeId v);

  AugmentedNetwork finish();

 private:
  NodeId chain_node(int product, std::size_t t);
  const ChannelPlan* plan_of(int product) const;

  const Network& base_;
  std::span<const ChannelPlan> plans_;
  GadgetOptions options_;
  NetworkBuilder builder_;
  AugmentedNetwork result_;
  std::vector<const ChannelPlan*> plan_by_product_;
};

/// Validates inputs (base network, one horizon, disjoint Real seeds, alpha and
/// beta >= 0, at most one plan per product) and builds every channel.
AugmentedNetwork build_augmented(const Network& base, const ProductSet& products,
                                 std::span<const ChannelPlan> plans, const GadgetOptions& options = {});

/// One instance of the gadget activation property: friend u buys either the
/// focal product p = (1, 0) or a competitor at angle theta from p, and the
/// gadget for edge (u, v) uses threshold chi_w and epsilon.
struct GadgetTrial {
  double threshold = 0.5;
  double epsilon = 0.25;
  double theta = 0.0;
  bool friend_buys_focal = true;
};

struct GadgetTrialResult {
  bool activated = false;
  std::int32_t activation_time = -1;
  bool holds = false;  // activated exactly when the friend bought p, at step 1, buying p
};

GadgetTrialResult run_gadget_trial(const GadgetTrial& trial);

/// Plans file: {"horizon": T, "plans": [{"product", "seeds", "alpha", "beta"}]}.
std::vector<ChannelPlan> parse_plans(const std::string& json_text);
std::vector<ChannelPlan> load_plans(const std::filesystem::path& path);
std::string format_plans(std::span<const ChannelPlan> plans);

/// Provenance sidecar: {"pseudonodes": [{"id", "role", "product", ...}]}.
std::string format_provenance(const AugmentedNetwork& augmented);

}  // namespace adspread
