#include "adspread/fixtures.hpp"

#include <array>

#include "adspread/io.hpp"

namespace adspread {
namespace {

void set_unit_similarities(NetworkBuilder& b, const std::vector<Edge>& edges) {
  for (const auto& e : edges) b.set_similarity(e.src, e.dst, 1.0);
}

void write_fixture(const Fixture& fx, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  save_network(fx.net, dir / "network.txt", dir / "similarity.txt");
  write_file_atomic(dir / "products.txt", format_products(fx.products));
  write_file_atomic(dir / "plans.json", format_plans(fx.plans));
}

}  // namespace

SeedAssignment Fixture::seeds() const {
  SeedAssignment s;
  s.by_product.resize(products.size());
  for (const auto& plan : plans) s.by_product[static_cast<std::size_t>(plan.product)] = plan.seeds;
  return s;
}

ProductSet orthogonal_products() {
  const std::array<double, 2> p{1.0, 0.0};
  const std::array<double, 2> q{0.0, 1.0};
  return ProductSet({normalize_product(p, 1, 0), normalize_product(q, 1, 1)});
}

Fixture make_fig2() {
  using namespace fig2;
  const std::vector<Edge> edges{
      {kSeedP, kU, 1.0}, {kSeedP, kV, 0.4}, {kSeedQ, kW, 1.0},
      {kSeedQ, kV, 0.2}, {kU, kV, 0.1},     {kW, kV, 0.2},
  };
  NetworkBuilder b(5);
  for (const auto& e : edges) b.add_edge(e.src, e.dst, e.weight);
  set_unit_similarities(b, edges);
  Fixture fx{b.build(), orthogonal_products(), {}};
  fx.plans = {ChannelPlan{0, {kSeedP}, 0.0, {}}, ChannelPlan{1, {kSeedQ}, 0.0, {}}};
  return fx;
}

Fixture make_fig3(bool with_u) {
  using namespace fig3;
  std::vector<Edge> edges{
      {kSeedP, kSureFirst, 1.0}, {kSeedP, kSureFirst + 1, 1.0}, {kSeedQ, kA, 0.6},
      {kU, kA, 0.4},             {kA, kV, 0.7},                 {kSureFirst, kV, 0.3},
  };
  for (std::size_t i = 0; i < kSinks; ++i) edges.push_back({kV, static_cast<NodeId>(kSinkFirst + i), 1.0});
  NetworkBuilder b(kNodes);
  for (const auto& e : edges) b.add_edge(e.src, e.dst, e.weight);
  set_unit_similarities(b, edges);
  Fixture fx{b.build(), orthogonal_products(), {}};
  std::vector<NodeId> p_seeds{kSeedP};
  if (with_u) p_seeds.push_back(kU);
  fx.plans = {ChannelPlan{0, p_seeds, 0.0, {}}, ChannelPlan{1, {kSeedQ}, 0.0, {}}};
  return fx;
}

void generate_fixtures(const std::filesystem::path& out_dir) {
  write_fixture(make_fig2(), out_dir / "fig2");
  write_fixture(make_fig3(false), out_dir / "fig3");
  write_file_atomic(out_dir / "fig3" / "plans_tp.json", format_plans(make_fig3(true).plans));
}

}  // namespace adspread
