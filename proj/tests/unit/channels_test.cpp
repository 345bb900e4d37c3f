#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "adspread/channels.hpp"
#include "adspread/fixtures.hpp"
#include "instances.hpp"

namespace adspread {
namespace {

ProductSet one_product() {
  const std::array<double, 2> p{1, 0};
  return ProductSet({normalize_product(p, 1, 0)});
}

Network pair_network(double weight, double h) {
  NetworkBuilder b(2);
  b.add_edge(0, 1, weight);
  if (h > 0.0) b.set_similarity(0, 1, h);
  return b.build();
}

TEST(ScalingRatio, FullyOccupiedNodeGetsNothing) {
  const Network net = pair_network(1.0, 0.5);
  const std::vector<ChannelPlan> plans{{0, {}, 1.0, {0.5}}};
  EXPECT_EQ(scaling_ratio(net, 1, plans), 0.0);
}

TEST(ScalingRatio, ResidualOverNominal) {
  NetworkBuilder b(3);
  b.add_edge(0, 2, 0.4);
  b.add_edge(1, 2, 0.2);
  const Network net = b.build();
  const std::vector<ChannelPlan> plans{{0, {}, 0.0, {0.2, 0.2}}};
  EXPECT_DOUBLE_EQ(scaling_ratio(net, 2, plans), 1.0);
}

TEST(ScalingRatio, ZeroPlansGiveZero) {
  const Network net = pair_network(0.5, 0.5);
  const std::vector<ChannelPlan> plans{{0, {}, 0.0, {0.0, 0.0}}};
  EXPECT_EQ(scaling_ratio(net, 1, plans), 0.0);
}

TEST(MassMedia, ZeroEntriesAreSkipped) {
  const Network net = pair_network(0.7, 0.0);
  const std::vector<ChannelPlan> plans{{0, {}, 0.0, {0.1, 0.0, 0.2}}};
  const auto aug = build_augmented(net, one_product(), plans);
  const auto& chain = aug.media_chains[0];
  ASSERT_EQ(chain.size(), 3u);
  EXPECT_DOUBLE_EQ(aug.net.weight(chain[0], 1), 0.1);
  EXPECT_EQ(aug.net.weight(chain[1], 1), 0.0);
  EXPECT_DOUBLE_EQ(aug.net.weight(chain[2], 1), 0.2);
  std::size_t media_into_v = 0;
  for (const auto& nb : aug.net.in_neighbors(1)) media_into_v += aug.net.is_real(nb.node) ? 0 : 1;
  EXPECT_EQ(media_into_v, 2u);
}

TEST(MassMedia, ChainStructure) {
  const Network net = pair_network(0.5, 0.0);
  const std::vector<ChannelPlan> plans{{0, {}, 0.0, {0.1, 0.1, 0.1, 0.1}}};
  const auto aug = build_augmented(net, one_product(), plans);
  const auto& chain = aug.media_chains[0];
  ASSERT_EQ(chain.size(), 4u);
  EXPECT_EQ(chain[0], aug.product_roots[0]);
  EXPECT_EQ(aug.net.role(chain[0]).kind, NodeKind::ProductRoot);
  for (std::size_t t = 1; t < chain.size(); ++t) {
    const auto in = aug.net.in_neighbors(chain[t]);
    ASSERT_EQ(in.size(), 1u);
    EXPECT_EQ(in[0], (Neighbor{chain[t - 1], 1.0}));
    EXPECT_EQ(aug.net.role(chain[t]).step, static_cast<int>(t + 1));
  }
  const auto products = one_product();
  DiffusionEngine engine(aug.net, products);
  for (std::uint32_t r = 0; r < 20; ++r) {
    const auto& out = engine.run(aug.seeds, StreamKey{5, r});
    for (std::size_t t = 0; t < chain.size(); ++t) {
      EXPECT_EQ(out.activation_time[chain[t]], static_cast<std::int32_t>(t));
      EXPECT_EQ(out.purchased[chain[t]], 0);
    }
  }
}

TEST(MassMedia, SinglePseudoedgeActivatesAtItsStep) {
  NetworkBuilder b(1);
  const NodeId root = b.add_node(NodeRole::product_root(0), 0.5);
  b.add_edge(root, 0, 0.5);
  const Network net = b.build();
  auto th = sample_thresholds(net, StreamKey{});
  th.values[0] = 0.4;
  SeedAssignment seeds{{{}}};
  const auto out = run_diffusion(net, one_product(), seeds, th, StreamKey{});
  EXPECT_EQ(out.activation_time[0], 1);
  EXPECT_EQ(out.purchased[0], 0);
}

TEST(Gadget, OrthogonalFriendNeverTriggers) {
  const auto r = run_gadget_trial({0.5, 0.25, std::numbers::pi / 2, false});
  EXPECT_FALSE(r.activated);
  EXPECT_TRUE(r.holds);
  EXPECT_NEAR(std::hypot(0.25, 0.25), 0.3535533905932738, 1e-15);
}

TEST(Gadget, FocalFriendTriggersNextStep) {
  const auto r = run_gadget_trial({0.5, 0.25, std::numbers::pi / 2, true});
  EXPECT_TRUE(r.activated);
  EXPECT_EQ(r.activation_time, 1);
  EXPECT_TRUE(r.holds);
}

TEST(Gadget, EqualityCaseSurvivesRounding) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double chi = 1.0 - u(rng);
    const auto r = run_gadget_trial({chi, chi * (0.01 + 0.98 * u(rng)), 0.3, true});
    ASSERT_TRUE(r.holds) << "chi " << chi;
  }
}

TEST(Gadget, NormBelowThresholdForAnyPositiveAngle) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double chi = 1.0 - u(rng);
    const double eps = chi * (0.01 + 0.98 * u(rng));
    const double theta = std::numbers::pi * (1.0 - u(rng));
    const double norm2 = (chi - eps) * (chi - eps) + eps * eps + 2 * eps * (chi - eps) * std::cos(theta);
    EXPECT_LT(norm2, chi * chi);
  }
}

TEST(Gadget, InactiveFriendLeavesGadgetBelowThreshold) {
  const Network net = pair_network(0.5, 1.0);
  const std::vector<ChannelPlan> plans{{0, {}, 1.0, {}}};
  const auto aug = build_augmented(net, one_product(), plans);
  const auto gadgets = aug.gadgets();
  ASSERT_EQ(gadgets.size(), 1u);
  const NodeId w = gadgets[0];
  EXPECT_DOUBLE_EQ(aug.net.weight(aug.product_roots[0], w), 0.25);
  EXPECT_DOUBLE_EQ(aug.net.weight(0, w), 0.25);
  EXPECT_DOUBLE_EQ(aug.net.weight(w, 1), 0.5);
  EXPECT_EQ(aug.net.fixed_threshold(w), 0.5);
  const auto products = one_product();
  DiffusionEngine engine(aug.net, products);
  EXPECT_EQ(engine.run(aug.seeds, StreamKey{}).activation_time[w], -1);
}

// x -> u -> v: u buys at 1, the gadget on (u, v) at 2, and v hears it at 3.
TEST(Gadget, RecommendationReachesTargetTwoStepsLater) {
  NetworkBuilder b(3);
  b.add_edge(0, 1, 1.0);
  b.add_edge(1, 2, 0.2);
  b.set_similarity(1, 2, 1.0);
  const Network net = b.build();
  const std::vector<ChannelPlan> plans{{0, {0}, 1.0, {}}};
  const auto aug = build_augmented(net, one_product(), plans);
  const auto gadgets = aug.gadgets();
  ASSERT_EQ(gadgets.size(), 1u);
  const NodeId w = gadgets[0];
  EXPECT_DOUBLE_EQ(aug.net.weight(w, 2), 0.8);
  auto th = sample_thresholds(aug.net, StreamKey{});
  th.values[1] = 0.5;
  th.values[2] = 0.5;  // between the direct 0.2 and the full 1.0
  const auto out = run_diffusion(aug.net, one_product(), aug.seeds, th, StreamKey{});
  EXPECT_EQ(out.activation_time[1], 1);
  EXPECT_EQ(out.activation_time[w], 2);
  EXPECT_EQ(out.activation_time[2], 3);
}

TEST(Augment, CountsWithoutSimilarity) {
  const Network net = pair_network(0.5, 0.0);
  const std::vector<ChannelPlan> plans{{0, {}, 1.0, {0.3, 0.4}}};
  const auto aug = build_augmented(net, one_product(), plans);
  EXPECT_EQ(aug.net.node_count(), 4u);
  EXPECT_TRUE(aug.gadgets().empty());
  std::size_t media = 0;
  for (const auto& e : aug.net.edges()) {
    if (!aug.net.is_real(e.src) && aug.net.is_real(e.dst)) ++media;
  }
  EXPECT_LE(media, 4u);
}

TEST(Augment, OneGadgetPerEdgeAndProduct) {
  const Network net = pair_network(0.5, 0.8);
  const std::array<double, 2> p{1, 0}, q{0, 1};
  const ProductSet products({normalize_product(p, 1, 0), normalize_product(q, 1, 1)});
  const std::vector<ChannelPlan> plans{{0, {}, 1.0, {}}, {1, {}, 2.0, {}}};
  const auto aug = build_augmented(net, products, plans);
  EXPECT_EQ(aug.gadgets().size(), 2u);
}

TEST(Augment, ZeroPlansAddOnlyRoots) {
  const Network net = pair_network(0.5, 0.8);
  const std::array<double, 2> p{1, 0}, q{0, 1};
  const ProductSet products({normalize_product(p, 1, 0), normalize_product(q, 1, 1)});
  const std::vector<ChannelPlan> plans{{0, {}, 0.0, {}}, {1, {}, 0.0, {}}};
  const auto aug = build_augmented(net, products, plans);
  EXPECT_EQ(aug.net.node_count(), 4u);
  EXPECT_EQ(aug.net.edge_count(), 1u);
  for (NodeId r : aug.product_roots) EXPECT_EQ(aug.net.role(r).kind, NodeKind::ProductRoot);
}

TEST(Augment, RejectsBadPlans) {
  const Network net = pair_network(0.5, 0.8);
  const auto products = one_product();
  const std::vector<ChannelPlan> unknown{{3, {}, 0.0, {}}};
  EXPECT_THROW(build_augmented(net, products, unknown), Error);
  const std::vector<ChannelPlan> negative{{0, {}, -1.0, {}}};
  EXPECT_THROW(build_augmented(net, products, negative), Error);
  const std::vector<ChannelPlan> duplicate{{0, {}, 0.0, {}}, {0, {}, 0.0, {}}};
  EXPECT_THROW(build_augmented(net, products, duplicate), Error);
  GadgetOptions bad;
  bad.gadget_epsilon = 0.6;
  const std::vector<ChannelPlan> ok{{0, {}, 1.0, {}}};
  EXPECT_THROW(build_augmented(net, products, ok, bad), Error);
}

// Pseudo weight into every Real node equals ratio times the nominal budget,
// capped by the attention left over by social edges.
TEST(Augment, ScalingConservation) {
  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int g = 0; g < 30; ++g) {
    const Network base =
        test::random_network(rng, {.nodes = 10, .edge_probability = 0.3, .min_weight_sum = 0.1,
                                   .max_weight_sum = 1.0, .similarities = true});
    const auto products = test::random_products(rng, 3, 3);
    const std::size_t T = 1 + g % 3;
    std::vector<ChannelPlan> plans;
    for (int p = 0; p < 3; ++p) {
      ChannelPlan plan{p, {}, u(rng) * 2.0, std::vector<double>(T)};
      for (double& b : plan.beta) b = u(rng) < 0.3 ? 0.0 : u(rng);
      plan.seeds = {static_cast<NodeId>(p)};
      plans.push_back(plan);
    }
    const auto aug = build_augmented(base, products, plans);
    EXPECT_TRUE(validate(aug.net).empty());
    for (NodeId v = 0; v < base.node_count(); ++v) {
      double pseudo = 0.0;
      for (const auto& nb : aug.net.in_neighbors(v)) pseudo += aug.net.is_real(nb.node) ? 0.0 : nb.weight;
      double nominal = 0.0;
      double similar = 0.0;
      for (const auto& nb : base.in_neighbors(v)) similar += base.similarity(nb.node, v);
      for (const auto& plan : plans) nominal += plan.alpha * similar + plan.beta_total();
      EXPECT_NEAR(pseudo, aug.scale_factors[v] * nominal, 1e-12);
      EXPECT_LE(pseudo, 1.0 - base.incoming_weight_sum(v) + 1e-9);
    }
    DiffusionEngine engine(aug.net, products);
    const auto& out = engine.run(aug.seeds, StreamKey{static_cast<std::uint64_t>(g), 0});
    for (int p = 0; p < 3; ++p) EXPECT_EQ(out.purchased[aug.product_roots[p]], p);
  }
}

TEST(Plans, JsonRoundTrip) {
  const std::vector<ChannelPlan> plans{{0, {1, 4}, 0.25, {0.1, 0.0}}, {1, {2}, 0.0, {0.3, 0.5}}};
  const std::string text = format_plans(plans);
  EXPECT_EQ(parse_plans(text), plans);
  EXPECT_EQ(format_plans(parse_plans(text)), text);
}

TEST(Plans, ParseErrors) {
  auto kind = [](const std::string& text) {
    try {
      (void)parse_plans(text);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Internal;
  };
  EXPECT_EQ(kind("{not json"), ErrorKind::Parse);
  EXPECT_EQ(kind(R"({"plans": []})"), ErrorKind::Parse);
  EXPECT_EQ(kind(R"({"horizon": 2, "plans": [{"product": 0, "seeds": [], "alpha": 0, "beta": [1]}]})"),
            ErrorKind::Parse);
}

TEST(Provenance, ListsEveryPseudonode) {
  const auto fx = make_fig3();
  const auto aug = build_augmented(fx.net, fx.products, fx.plans);
  const std::string json = format_provenance(aug);
  EXPECT_NE(json.find("\"ProductRoot\""), std::string::npos);
  EXPECT_EQ(aug.net.node_count(), fig3::kNodes + 2);
}

}  // namespace
}  // namespace adspread
