#include "adspread/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

namespace adspread {

double node_threshold(const Network& net, NodeId v, StreamKey key) {
  if (net.role(v).is_pseudo()) return net.fixed_threshold(v);
  PhiloxStream rng(key, StreamPurpose::Threshold, v, 0);
  return uniform01(rng);
}

ThresholdAssignment sample_thresholds(const Network& net, StreamKey key) {
  ThresholdAssignment out;
  out.values.resize(net.node_count());
  out.kinds.resize(net.node_count());
  for (NodeId v = 0; v < net.node_count(); ++v) {
    out.values[v] = node_threshold(net, v, key);
    out.kinds[v] = net.role(v).is_pseudo() ? ThresholdKind::Fixed : ThresholdKind::RandomUniform;
  }
  return out;
}

void SeedAssignment::check(const Network& net, std::size_t product_count) const {
  if (by_product.size() > product_count) {
    throw Error(ErrorKind::Config, fmt::format("seed sets given for {} products but only {} exist",
                                               by_product.size(), product_count));
  }
  std::vector<int> owner(net.node_count(), -1);
  for (std::size_t p = 0; p < by_product.size(); ++p) {
    for (NodeId v : by_product[p]) {
      if (v >= net.node_count()) {
        throw Error(ErrorKind::Config, fmt::format("seed {} of product {} out of range", v, p));
      }
      const auto& role = net.role(v);
      if (role.is_pseudo() &&
          !(role.kind == NodeKind::ProductRoot && role.product == static_cast<int>(p))) {
        throw Error(ErrorKind::Config, fmt::format("seed {} of product {} is a pseudonode", v, p));
      }
      if (owner[v] >= 0 && owner[v] != static_cast<int>(p)) {
        throw Error(ErrorKind::Config,
                    fmt::format("node {} seeded by products {} and {}", v, owner[v], p));
      }
      owner[v] = static_cast<int>(p);
    }
  }
}

std::size_t DiffusionOutcome::count(std::size_t product, std::size_t real_nodes) const {
  std::size_t n = 0;
  const auto limit = std::min(real_nodes, purchased.size());
  for (std::size_t v = 0; v < limit; ++v) n += purchased[v] == static_cast<std::int32_t>(product);
  return n;
}

std::int32_t default_max_steps(const Network& net) {
  int chain = 0;
  for (NodeId v = static_cast<NodeId>(net.real_node_count()); v < net.node_count(); ++v) {
    const auto& r = net.role(v);
    if (r.kind == NodeKind::MediaChain || r.kind == NodeKind::ProductRoot) chain = std::max(chain, r.step);
  }
  return static_cast<std::int32_t>(net.node_count()) + chain + 2;
}

namespace {

void seed_node(std::vector<std::int32_t>& act, std::vector<std::int32_t>& bought, NodeId v, int product) {
  act[v] = 0;
  bought[v] = product;
}

}  // namespace

DiffusionState initial_state(const Network& net, const ProductSet& products, const SeedAssignment& seeds) {
  seeds.check(net, products.size());
  DiffusionState s;
  s.activation_time.assign(net.node_count(), -1);
  s.purchased.assign(net.node_count(), -1);
  s.aggregate.assign(net.node_count() * products.dimension(), 0.0);
  for (std::size_t p = 0; p < seeds.by_product.size(); ++p) {
    for (NodeId v : seeds.by_product[p]) seed_node(s.activation_time, s.purchased, v, static_cast<int>(p));
  }
  for (NodeId v = 0; v < net.node_count(); ++v) {
    const auto& r = net.role(v);
    if (r.kind == NodeKind::ProductRoot) {
      if (r.product < 0 || static_cast<std::size_t>(r.product) >= products.size()) {
        throw Error(ErrorKind::Config, fmt::format("product root {} names unknown product {}", v, r.product));
      }
      seed_node(s.activation_time, s.purchased, v, r.product);
    }
  }
  return s;
}

DiffusionState step(const Network& net, const ProductSet& products, const DiffusionState& state,
                    const ThresholdAssignment& thresholds, StreamKey tie_key,
                    std::span<const NodeId> order) {
  const std::size_t n = net.node_count();
  const std::size_t f = products.dimension();
  std::vector<NodeId> all;
  if (order.empty()) {
    all.resize(n);
    std::iota(all.begin(), all.end(), NodeId{0});
    order = all;
  }
  DiffusionState next = state;
  next.time = state.time + 1;
  std::fill(next.aggregate.begin(), next.aggregate.end(), 0.0);
  for (NodeId v : order) {
    if (state.influenced(v)) continue;
    std::span<double> agg(next.aggregate.data() + v * f, f);
    const auto src = net.in_sources(v);
    const auto w = net.in_weights(v);
    for (std::size_t i = 0; i < src.size(); ++i) {
      if (!state.influenced(src[i])) continue;
      const auto& p = products[static_cast<std::size_t>(state.purchased[src[i]])];
      for (std::size_t k = 0; k < f; ++k) agg[k] += w[i] * p.features[k];
    }
    if (reaches_threshold(norm(agg), thresholds.values[v])) {
      PhiloxStream tie(tie_key, StreamPurpose::TieBreak, v, static_cast<std::uint32_t>(next.time));
      next.activation_time[v] = next.time;
      next.purchased[v] = static_cast<std::int32_t>(choose_product(agg, products, tie));
    }
  }
  return next;
}

DiffusionEngine::DiffusionEngine(const Network& net, const ProductSet& products)
    : net_(&net), products_(&products), dim_(products.dimension()) {
  const std::size_t n = net.node_count();
  outcome_.activation_time.assign(n, -1);
  outcome_.purchased.assign(n, -1);
  aggregate_.assign(n * dim_, 0.0);
  threshold_.assign(n, std::numeric_limits<double>::quiet_NaN());
  touched_flag_.assign(n, 0);
  for (NodeId v = static_cast<NodeId>(net.real_node_count()); v < n; ++v) {
    const auto& r = net.role(v);
    if (r.kind == NodeKind::ProductRoot) {
      if (r.product < 0 || static_cast<std::size_t>(r.product) >= products.size()) {
        throw Error(ErrorKind::Config, fmt::format("product root {} names unknown product {}", v, r.product));
      }
      roots_.push_back(v);
      root_product_.push_back(r.product);
    }
  }
}

const DiffusionOutcome& DiffusionEngine::run(const SeedAssignment& seeds, StreamKey key,
                                             std::int32_t max_steps) {
  const Network& net = *net_;
  return run_impl(seeds, [&net, key](NodeId v) { return node_threshold(net, v, key); }, key, max_steps);
}

const DiffusionOutcome& DiffusionEngine::run(const SeedAssignment& seeds,
                                             const ThresholdAssignment& thresholds, StreamKey key,
                                             std::int32_t max_steps) {
  if (thresholds.values.size() != net_->node_count()) {
    throw Error(ErrorKind::Config, "threshold assignment size does not match the network");
  }
  return run_impl(seeds, [&thresholds](NodeId v) { return thresholds.values[v]; }, key, max_steps);
}

template <typename ThresholdFn>
const DiffusionOutcome& DiffusionEngine::run_impl(const SeedAssignment& seeds, ThresholdFn&& threshold_of,
                                                  StreamKey key, std::int32_t max_steps) {
  const Network& net = *net_;
  const auto flat = products_->flat();
  const std::size_t f = dim_;
  if (max_steps <= 0) max_steps = default_max_steps(net);

  // Reset only what the previous replication touched.
  for (NodeId v : dirty_) {
    outcome_.activation_time[v] = -1;
    outcome_.purchased[v] = -1;
    std::fill_n(aggregate_.begin() + static_cast<std::ptrdiff_t>(v * f), f, 0.0);
    threshold_[v] = std::numeric_limits<double>::quiet_NaN();
  }
  dirty_.clear();
  outcome_.steps = 0;
  frontier_.clear();

  auto activate = [&](NodeId v, std::int32_t t, std::int32_t product) {
    outcome_.activation_time[v] = t;
    outcome_.purchased[v] = product;
    dirty_.push_back(v);
  };

  for (std::size_t p = 0; p < seeds.by_product.size(); ++p) {
    for (NodeId v : seeds.by_product[p]) {
      if (v >= net.node_count()) {
        throw Error(ErrorKind::Config, fmt::format("seed {} of product {} out of range", v, p));
      }
      if (outcome_.activation_time[v] >= 0) {
        if (outcome_.purchased[v] != static_cast<std::int32_t>(p)) {
          throw Error(ErrorKind::Config,
                      fmt::format("node {} seeded by products {} and {}", v, outcome_.purchased[v], p));
        }
        continue;
      }
      activate(v, 0, static_cast<std::int32_t>(p));
      frontier_.push_back(v);
    }
  }
  for (std::size_t i = 0; i < roots_.size(); ++i) {
    if (outcome_.activation_time[roots_[i]] < 0) {
      activate(roots_[i], 0, root_product_[i]);
      frontier_.push_back(roots_[i]);
    }
  }
  std::sort(frontier_.begin(), frontier_.end());

  std::int32_t t = 0;
  while (!frontier_.empty()) {
    if (t >= max_steps) {
      throw Error(ErrorKind::Internal,
                  fmt::format("diffusion did not reach a fixed point within {} steps", max_steps));
    }
    ++t;
    // Push contributions of nodes influenced at t-1 into uninfluenced neighbours.
    touched_.clear();
    for (NodeId u : frontier_) {
      const double* pu = flat.data() + static_cast<std::size_t>(outcome_.purchased[u]) * f;
      const auto dst = net.out_targets(u);
      const auto w = net.out_weights(u);
      for (std::size_t i = 0; i < dst.size(); ++i) {
        const NodeId v = dst[i];
        if (outcome_.activation_time[v] >= 0) continue;
        double* agg = aggregate_.data() + v * f;
        for (std::size_t k = 0; k < f; ++k) agg[k] += w[i] * pu[k];
        if (!touched_flag_[v]) {
          touched_flag_[v] = 1;
          touched_.push_back(v);
          if (std::isnan(threshold_[v])) {
            threshold_[v] = threshold_of(v);
            dirty_.push_back(v);
          }
        }
      }
    }
    // Decide activations from the aggregates alone; commit order is irrelevant.
    next_frontier_.clear();
    for (NodeId v : touched_) {
      touched_flag_[v] = 0;
      std::span<const double> agg(aggregate_.data() + v * f, f);
      if (reaches_threshold(norm(agg), threshold_[v])) {
        PhiloxStream tie(key, StreamPurpose::TieBreak, v, static_cast<std::uint32_t>(t));
        outcome_.activation_time[v] = t;
        outcome_.purchased[v] = static_cast<std::int32_t>(choose_product(agg, *products_, tie));
        next_frontier_.push_back(v);
      }
    }
    if (!next_frontier_.empty()) outcome_.steps = t;
    std::sort(next_frontier_.begin(), next_frontier_.end());
    frontier_.swap(next_frontier_);
  }
  return outcome_;
}

DiffusionOutcome run_diffusion(const Network& net, const ProductSet& products, const SeedAssignment& seeds,
                               const ThresholdAssignment& thresholds, StreamKey tie_key,
                               std::int32_t max_steps) {
  seeds.check(net, products.size());
  DiffusionEngine engine(net, products);
  return engine.run(seeds, thresholds, tie_key, max_steps);
}

std::string format_trajectory(const DiffusionOutcome& outcome) {
  std::string out = "node,activation_time,product\n";
  for (std::size_t v = 0; v < outcome.activation_time.size(); ++v) {
    out += fmt::format("{},{},{}\n", v, outcome.activation_time[v], outcome.purchased[v]);
  }
  return out;
}

}  // namespace adspread
