#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "adspread/feature_space.hpp"
#include "adspread/fixtures.hpp"

namespace adspread {
namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Fixtures, Fig2Shape) {
  const auto fx = make_fig2();
  EXPECT_EQ(fx.net.real_node_count(), 5u);
  EXPECT_EQ(fx.net.edge_count(), 6u);
  EXPECT_EQ(fx.plans.size(), 2u);
  EXPECT_EQ(fx.seeds().by_product[0], (std::vector<NodeId>{fig2::kSeedP}));
}

TEST(Fixtures, Fig3Shape) {
  const auto fx = make_fig3();
  EXPECT_EQ(fx.net.real_node_count(), fig3::kNodes);
  EXPECT_EQ(fx.seeds().by_product[0], (std::vector<NodeId>{fig3::kSeedP}));
  const auto tp = make_fig3(true);
  EXPECT_EQ(tp.seeds().by_product[0], (std::vector<NodeId>{fig3::kSeedP, fig3::kU}));
  EXPECT_EQ(tp.seeds().by_product[1], (std::vector<NodeId>{fig3::kSeedQ}));
}

TEST(Fixtures, ProductsAreOrthogonal) {
  const auto products = orthogonal_products();
  EXPECT_NEAR(angular_distance(products[0].features, products[1]), std::numbers::pi / 2, 1e-15);
}

TEST(Fixtures, GeneratedFilesAreStable) {
  const auto base = std::filesystem::temp_directory_path() / "adspread_fixture_test";
  std::filesystem::remove_all(base);
  generate_fixtures(base / "a");
  generate_fixtures(base / "b");
  for (const char* f : {"fig2/network.txt", "fig2/similarity.txt", "fig2/products.txt", "fig2/plans.json",
                        "fig3/network.txt", "fig3/similarity.txt", "fig3/products.txt", "fig3/plans.json",
                        "fig3/plans_tp.json"}) {
    const auto a = slurp(base / "a" / f);
    EXPECT_FALSE(a.empty()) << f;
    EXPECT_EQ(a, slurp(base / "b" / f)) << f;
  }
  const auto loaded = load_network(base / "a" / "fig3/network.txt");
  EXPECT_EQ(loaded.node_count(), fig3::kNodes);
  std::filesystem::remove_all(base);
}

}  // namespace
}  // namespace adspread
