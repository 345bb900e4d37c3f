#include "adspread/estimator.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "adspread/parallel.hpp"

namespace adspread {

double SpreadEstimate::probability(NodeId v, std::size_t product) const {
  const std::size_t products = mean.size();
  if (node_hits.empty()) throw Error(ErrorKind::Config, "per-node probabilities were not collected");
  if (v >= real_nodes || product >= products) {
    throw Error(ErrorKind::Config, fmt::format("no probability for node {} / product {}", v, product));
  }
  return static_cast<double>(node_hits[v * products + product]) / static_cast<double>(replications);
}

SpreadEstimate estimate_spread(const Network& net, const ProductSet& products, const SeedAssignment& seeds,
                               const EstimatorConfig& config) {
  if (config.replications == 0) throw Error(ErrorKind::Config, "replications must be >= 1");
  if (config.replications > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorKind::Config, "at most 2^32-1 replications per estimate");
  }
  seeds.check(net, products.size());
  const std::size_t P = products.size();
  const std::size_t real = net.real_node_count();
  const unsigned workers = resolve_workers(config.workers);

  struct Partial {
    std::vector<std::uint64_t> sum, sum_sq, hits;
  };
  std::vector<Partial> partials(workers);

  parallel_chunks(config.replications, workers, [&](unsigned w, std::size_t begin, std::size_t end) {
    Partial& acc = partials[w];
    acc.sum.assign(P, 0);
    acc.sum_sq.assign(P, 0);
    if (config.per_node) acc.hits.assign(real * P, 0);
    DiffusionEngine engine(net, products);
    std::vector<std::uint64_t> counts(P);
    for (std::size_t r = begin; r < end; ++r) {
      const auto& out = engine.run(seeds, StreamKey{config.seed, static_cast<std::uint32_t>(r)});
      std::fill(counts.begin(), counts.end(), 0);
      for (std::size_t v = 0; v < real; ++v) {
        const auto bought = out.purchased[v];
        if (bought < 0) continue;
        ++counts[static_cast<std::size_t>(bought)];
        if (config.per_node) ++acc.hits[v * P + static_cast<std::size_t>(bought)];
      }
      for (std::size_t p = 0; p < P; ++p) {
        acc.sum[p] += counts[p];
        acc.sum_sq[p] += counts[p] * counts[p];
      }
    }
  });

  SpreadEstimate est;
  est.replications = config.replications;
  est.real_nodes = real;
  est.count_sum.assign(P, 0);
  std::vector<std::uint64_t> sum_sq(P, 0);
  if (config.per_node) est.node_hits.assign(real * P, 0);
  for (const auto& part : partials) {
    if (part.sum.empty()) continue;
    for (std::size_t p = 0; p < P; ++p) {
      est.count_sum[p] += part.sum[p];
      sum_sq[p] += part.sum_sq[p];
    }
    for (std::size_t i = 0; i < part.hits.size(); ++i) est.node_hits[i] += part.hits[i];
  }
  __extension__ typedef unsigned __int128 Wide;
  const double R = static_cast<double>(config.replications);
  for (std::size_t p = 0; p < P; ++p) {
    est.mean.push_back(static_cast<double>(est.count_sum[p]) / R);
    if (config.replications < 2) {
      est.std_error.push_back(0.0);
      continue;
    }
    // Sample variance from exact integer moments: (R*S2 - S1^2) / (R*(R-1)).
    const Wide s1 = est.count_sum[p];
    const Wide scaled = static_cast<Wide>(config.replications) * sum_sq[p];
    const double numerator = static_cast<double>(scaled - s1 * s1);
    const double var = numerator / (R * (R - 1.0));
    est.std_error.push_back(std::sqrt(var / R));
  }
  return est;
}

SpreadEstimate estimate_spread(const AugmentedNetwork& augmented, const ProductSet& products,
                               const EstimatorConfig& config) {
  return estimate_spread(augmented.net, products, augmented.seeds, config);
}

double estimate_node_probability(const AugmentedNetwork& augmented, const ProductSet& products, NodeId v,
                                 std::size_t product, const EstimatorConfig& config) {
  if (v >= augmented.real_nodes) {
    throw Error(ErrorKind::Config, fmt::format("node {} is not a Real node", v));
  }
  if (product >= products.size()) throw Error(ErrorKind::Config, fmt::format("unknown product {}", product));
  auto cfg = config;
  cfg.per_node = true;
  return estimate_spread(augmented, products, cfg).probability(v, product);
}

}  // namespace adspread
