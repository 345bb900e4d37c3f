#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>

#include "adspread/estimator.hpp"
#include "adspread/fixtures.hpp"
#include "instances.hpp"

namespace adspread {
namespace {

ProductSet one_product() {
  const std::array<double, 2> p{1, 0};
  return ProductSet({normalize_product(p, 1, 0)});
}

TEST(Estimator, DeterministicChainHasNoVariance) {
  NetworkBuilder b(4);
  for (NodeId v = 1; v < 4; ++v) b.add_edge(v - 1, v, 1.0);
  const Network net = b.build();
  SeedAssignment seeds{{{0}}};
  const auto est = estimate_spread(net, one_product(), seeds, {.replications = 1000, .seed = 3});
  EXPECT_EQ(est.mean[0], 4.0);
  EXPECT_EQ(est.std_error[0], 0.0);
}

TEST(Estimator, SinglePseudoedgeProbability) {
  NetworkBuilder b(1);
  const NodeId root = b.add_node(NodeRole::product_root(0), 0.5);
  b.add_edge(root, 0, 0.37);
  const Network net = b.build();
  SeedAssignment seeds{{{}}};
  const auto est = estimate_spread(net, one_product(), seeds, {.replications = 100000, .seed = 8});
  EXPECT_NEAR(est.mean[0], 0.37, 3 * est.std_error[0]);
  EXPECT_NEAR(est.std_error[0], std::sqrt(0.37 * 0.63 / 100000), 1e-4);
}

TEST(Estimator, SeedHasProbabilityOne) {
  const auto fx = make_fig3();
  const auto aug = build_augmented(fx.net, fx.products, fx.plans);
  const double p = estimate_node_probability(aug, fx.products, fig3::kSeedP, 0, {.replications = 500, .seed = 1});
  EXPECT_EQ(p, 1.0);
}

TEST(Estimator, Fig3Probabilities) {
  const auto fx = make_fig3();
  const auto aug = build_augmented(fx.net, fx.products, fx.plans);
  const auto est = estimate_spread(aug, fx.products, {.replications = 100000, .seed = 12, .per_node = true});
  EXPECT_NEAR(est.mean[0], 6.72, 4 * est.std_error[0]);
  EXPECT_NEAR(est.probability(fig3::kA, 1), 0.6, 0.01);
  EXPECT_NEAR(est.probability(fig3::kV, 0), 0.12, 0.01);
}

TEST(Estimator, ResultIndependentOfWorkerCount) {
  std::mt19937_64 rng(5);
  const Network net = test::random_network(rng, {.nodes = 15, .edge_probability = 0.3});
  const auto products = test::random_products(rng, 2, 3);
  const auto seeds = test::random_seeds(rng, 15, 2, 2);
  EstimatorConfig cfg{.replications = 5003, .seed = 77, .workers = 1, .per_node = true};
  const auto one = estimate_spread(net, products, seeds, cfg);
  cfg.workers = 3;
  const auto three = estimate_spread(net, products, seeds, cfg);
  cfg.workers = 8;
  const auto eight = estimate_spread(net, products, seeds, cfg);
  EXPECT_EQ(one.mean, three.mean);
  EXPECT_EQ(one.std_error, three.std_error);
  EXPECT_EQ(one.node_hits, three.node_hits);
  EXPECT_EQ(one.mean, eight.mean);
  EXPECT_EQ(one.std_error, eight.std_error);
}

TEST(Estimator, PerNodeProbabilitiesSumToSpread) {
  const auto fx = make_fig3(true);
  const auto aug = build_augmented(fx.net, fx.products, fx.plans);
  const auto est = estimate_spread(aug, fx.products, {.replications = 20000, .seed = 4, .per_node = true});
  for (std::size_t p = 0; p < 2; ++p) {
    std::uint64_t hits = 0;
    for (NodeId v = 0; v < est.real_nodes; ++v) hits += est.node_hits[v * 2 + p];
    EXPECT_EQ(hits, est.count_sum[p]);
    EXPECT_EQ(static_cast<double>(hits) / 20000.0, est.mean[p]);
  }
}

TEST(Estimator, StdErrorShrinksWithReplications) {
  const auto fx = make_fig3();
  const auto aug = build_augmented(fx.net, fx.products, fx.plans);
  const auto small = estimate_spread(aug, fx.products, {.replications = 2500, .seed = 2});
  const auto large = estimate_spread(aug, fx.products, {.replications = 40000, .seed = 2});
  EXPECT_NEAR(small.std_error[0] / large.std_error[0], 4.0, 0.4);
  EXPECT_GE(small.mean[0], 0.0);
  EXPECT_LE(small.mean[0], static_cast<double>(small.real_nodes));
}

TEST(Estimator, RejectsZeroReplications) {
  const auto fx = make_fig2();
  EXPECT_THROW(estimate_spread(fx.net, fx.products, fx.seeds(), {.replications = 0}), Error);
}

TEST(Estimator, MissingPerNodeDataIsAnError) {
  const auto fx = make_fig2();
  const auto est = estimate_spread(fx.net, fx.products, fx.seeds(), {.replications = 10});
  EXPECT_THROW((void)est.probability(0, 0), Error);
}

}  // namespace
}  // namespace adspread
