#include "adspread/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "adspread/parallel.hpp"

namespace adspread {
namespace {

constexpr std::uint64_t kSamplingTag = 0x53414D50;  // "SAMP"
constexpr std::uint64_t kEvaluationTag = 0x4556414C;  // "EVAL"
constexpr double kBudgetSlack = 1e-9;

double rectified_normal(PhiloxStream& rng, double mean, double sd) {
  if (!(sd > 0.0)) return std::max(0.0, mean);
  return std::max(0.0, mean + sd * standard_normal(rng));
}

}  // namespace

double plan_cost(const ChannelPlan& plan, const CostModel& cm) {
  return cm.seed_unit_cost * static_cast<double>(plan.seeds.size()) + cm.alpha_unit_cost * plan.alpha +
         cm.beta_unit_cost * plan.beta_total();
}

double CrossEntropyState::distance(const CrossEntropyState& other) const {
  double d = std::max(std::abs(alpha_mean - other.alpha_mean), std::abs(alpha_std - other.alpha_std));
  for (std::size_t i = 0; i < std::min(seed_probs.size(), other.seed_probs.size()); ++i) {
    d = std::max(d, std::abs(seed_probs[i] - other.seed_probs[i]));
  }
  for (std::size_t t = 0; t < std::min(beta_mean.size(), other.beta_mean.size()); ++t) {
    d = std::max({d, std::abs(beta_mean[t] - other.beta_mean[t]), std::abs(beta_std[t] - other.beta_std[t])});
  }
  return d;
}

CrossEntropyState initial_ce_state(std::size_t real_nodes, std::span<const std::uint8_t> allowed,
                                   const CostModel& cm, double budget, std::size_t horizon) {
  CrossEntropyState s;
  std::size_t candidates = 0;
  for (std::size_t v = 0; v < real_nodes; ++v) candidates += allowed.empty() || allowed[v];
  double p0 = 0.5;
  if (cm.seed_unit_cost > 0.0 && candidates > 0) {
    p0 = std::min(0.5, budget / (2.0 * cm.seed_unit_cost * static_cast<double>(candidates)));
  }
  s.seed_probs.assign(real_nodes, 0.0);
  for (std::size_t v = 0; v < real_nodes; ++v) {
    if (allowed.empty() || allowed[v]) s.seed_probs[v] = p0;
  }
  // The other half of the budget is split evenly between alpha and the T betas.
  const double share = budget / 2.0 / 2.0;
  s.alpha_mean = cm.alpha_unit_cost > 0.0 ? share / cm.alpha_unit_cost : 1.0;
  s.alpha_std = s.alpha_mean;
  const double beta_each =
      horizon == 0 ? 0.0 : (cm.beta_unit_cost > 0.0 ? share / cm.beta_unit_cost : 1.0) / static_cast<double>(horizon);
  s.beta_mean.assign(horizon, beta_each);
  s.beta_std.assign(horizon, beta_each);
  return s;
}

ChannelPlan sample_plan(const CrossEntropyState& state, const CostModel& cm, double budget, PhiloxStream& rng,
                        int product, int max_retries) {
  if (!(budget > 0.0)) throw Error(ErrorKind::Config, "sample_plan: budget must be positive");
  ChannelPlan plan;
  plan.product = product;
  bool feasible = false;
  for (int attempt = 0; attempt <= max_retries && !feasible; ++attempt) {
    plan.seeds.clear();
    for (std::size_t v = 0; v < state.seed_probs.size(); ++v) {
      const double p = state.seed_probs[v];
      if (p > 0.0 && uniform01(rng) < p) plan.seeds.push_back(static_cast<NodeId>(v));
    }
    feasible = cm.seed_unit_cost * static_cast<double>(plan.seeds.size()) <= budget + kBudgetSlack;
  }
  if (!feasible) {
    throw Error(ErrorKind::Infeasible,
                fmt::format("no seed set within budget {} after {} retries", budget, max_retries));
  }

  plan.alpha = rectified_normal(rng, state.alpha_mean, state.alpha_std);
  plan.beta.resize(state.beta_mean.size());
  for (std::size_t t = 0; t < plan.beta.size(); ++t) {
    plan.beta[t] = rectified_normal(rng, state.beta_mean[t], state.beta_std[t]);
  }

  const double remaining = std::max(0.0, budget - cm.seed_unit_cost * static_cast<double>(plan.seeds.size()));
  const double continuous = cm.alpha_unit_cost * plan.alpha + cm.beta_unit_cost * plan.beta_total();
  if (continuous > remaining) {
    // Shrink slightly below the exact ratio so rounding cannot overshoot.
    const double scale = remaining / continuous * (1.0 - 4 * std::numeric_limits<double>::epsilon());
    plan.alpha *= scale;
    for (double& b : plan.beta) b *= scale;
  }
  return plan;
}

CrossEntropyState refit(const CrossEntropyState& previous, std::span<const ChannelPlan> elite,
                        std::span<const double> weights, double smoothing) {
  if (elite.empty()) throw Error(ErrorKind::Config, "refit: empty elite set");
  if (!weights.empty() && weights.size() != elite.size()) {
    throw Error(ErrorKind::Config, "refit: one weight per elite sample required");
  }
  std::vector<double> w(elite.size(), 1.0);
  if (!weights.empty()) {
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (total > 0.0) w.assign(weights.begin(), weights.end());
  }
  const double wsum = std::accumulate(w.begin(), w.end(), 0.0);

  CrossEntropyState fit = previous;
  std::fill(fit.seed_probs.begin(), fit.seed_probs.end(), 0.0);
  for (std::size_t i = 0; i < elite.size(); ++i) {
    for (NodeId v : elite[i].seeds) {
      if (v < fit.seed_probs.size()) fit.seed_probs[v] += w[i];
    }
  }
  for (double& p : fit.seed_probs) p /= wsum;

  auto moments = [&](auto&& value_of) {
    double mean = 0.0;
    for (std::size_t i = 0; i < elite.size(); ++i) mean += w[i] * value_of(elite[i]);
    mean /= wsum;
    double var = 0.0;
    for (std::size_t i = 0; i < elite.size(); ++i) {
      const double d = value_of(elite[i]) - mean;
      var += w[i] * d * d;
    }
    return std::pair(mean, std::sqrt(var / wsum));
  };
  std::tie(fit.alpha_mean, fit.alpha_std) = moments([](const ChannelPlan& p) { return p.alpha; });
  for (std::size_t t = 0; t < fit.beta_mean.size(); ++t) {
    std::tie(fit.beta_mean[t], fit.beta_std[t]) =
        moments([t](const ChannelPlan& p) { return t < p.beta.size() ? p.beta[t] : 0.0; });
  }

  const double lam = smoothing;
  auto blend = [lam](double fitted, double old) { return lam * fitted + (1.0 - lam) * old; };
  CrossEntropyState next = previous;
  for (std::size_t v = 0; v < next.seed_probs.size(); ++v) {
    next.seed_probs[v] = blend(fit.seed_probs[v], previous.seed_probs[v]);
  }
  next.alpha_mean = blend(fit.alpha_mean, previous.alpha_mean);
  next.alpha_std = blend(fit.alpha_std, previous.alpha_std);
  for (std::size_t t = 0; t < next.beta_mean.size(); ++t) {
    next.beta_mean[t] = blend(fit.beta_mean[t], previous.beta_mean[t]);
    next.beta_std[t] = blend(fit.beta_std[t], previous.beta_std[t]);
  }
  next.iteration = previous.iteration + 1;
  return next;
}

double evaluate_plan(const Network& base, const ProductSet& products, const ChannelPlan& plan,
                     std::span<const ChannelPlan> competitors, std::uint64_t replications, std::uint64_t seed,
                     const GadgetOptions& gadgets) {
  std::vector<ChannelPlan> all(competitors.begin(), competitors.end());
  all.push_back(plan);
  const auto augmented = build_augmented(base, products, all, gadgets);
  EstimatorConfig cfg;
  cfg.replications = replications;
  cfg.seed = seed;
  cfg.workers = 1;
  return estimate_spread(augmented, products, cfg).mean[static_cast<std::size_t>(plan.product)];
}

OptimizeResult ce_optimize(const Network& base, const ProductSet& products, int focal,
                           std::span<const ChannelPlan> competitor_plans, const CostModel& cm, double budget,
                           const CrossEntropyConfig& config, std::uint64_t seed) {
  if (focal < 0 || static_cast<std::size_t>(focal) >= products.size()) {
    throw Error(ErrorKind::Config, fmt::format("unknown focal product {}", focal));
  }
  if (!(budget >= 0.0)) throw Error(ErrorKind::Config, "budget must be >= 0");
  if (cm.seed_unit_cost < 0.0 || cm.alpha_unit_cost < 0.0 || cm.beta_unit_cost < 0.0) {
    throw Error(ErrorKind::Config, "unit costs must be >= 0");
  }
  if (!(config.elite_fraction > 0.0 && config.elite_fraction <= 1.0)) {
    throw Error(ErrorKind::Config, "elite fraction must lie in (0,1]");
  }
  if (!(config.smoothing > 0.0 && config.smoothing <= 1.0)) {
    throw Error(ErrorKind::Config, "smoothing must lie in (0,1]");
  }
  std::size_t horizon = config.horizon;
  for (const auto& plan : competitor_plans) {
    if (plan.product == focal) throw Error(ErrorKind::Config, "competitor plans include the focal product");
    if (plan.horizon() != horizon) {
      throw Error(ErrorKind::Config, fmt::format("competitor horizon {} differs from configured horizon {}",
                                                 plan.horizon(), horizon));
    }
  }

  const std::size_t n = base.node_count();
  const std::uint64_t eval_seed = derive_seed(seed, kEvaluationTag);
  OptimizeResult result;
  result.plan.product = focal;
  result.plan.beta.assign(horizon, 0.0);

  if (budget == 0.0) {
    result.value = evaluate_plan(base, products, result.plan, competitor_plans, config.replications, eval_seed,
                                 config.gadgets);
    result.evaluations = 1;
    result.converged = true;
    return result;
  }

  std::vector<std::uint8_t> allowed(n, 1);
  for (const auto& plan : competitor_plans) {
    for (NodeId s : plan.seeds) {
      if (s < n) allowed[s] = 0;
    }
  }
  CrossEntropyState state = initial_ce_state(n, allowed, cm, budget, horizon);
  const std::size_t N = config.samples > 0 ? config.samples : std::max<std::size_t>(100, 2 * n);
  const std::size_t n_elite =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(config.elite_fraction * static_cast<double>(N))));
  const unsigned workers = resolve_workers(config.workers);
  const std::uint64_t sampling_seed = derive_seed(seed, kSamplingTag);

  result.value = -std::numeric_limits<double>::infinity();
  std::vector<ChannelPlan> samples(N);
  std::vector<double> values(N);
  std::vector<std::size_t> order(N);

  for (int it = 1; it <= config.max_iterations; ++it) {
    for (std::size_t i = 0; i < N; ++i) {
      PhiloxStream rng(StreamKey{sampling_seed, static_cast<std::uint32_t>(it)}, StreamPurpose::Sampling,
                       static_cast<std::uint32_t>(i), 0);
      samples[i] = sample_plan(state, cm, budget, rng, focal, config.max_seed_retries);
    }
    parallel_chunks(N, workers, [&](unsigned, std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        values[i] = evaluate_plan(base, products, samples[i], competitor_plans, config.replications, eval_seed,
                                  config.gadgets);
      }
    });
    result.evaluations += N;

    for (std::size_t i = 0; i < N; ++i) {
      if (values[i] > result.value) {
        result.value = values[i];
        result.plan = samples[i];
      }
    }
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    std::vector<ChannelPlan> elite;
    std::vector<double> elite_weights;
    for (std::size_t k = 0; k < n_elite; ++k) {
      elite.push_back(samples[order[k]]);
      elite_weights.push_back(values[order[k]]);
    }

    IterationTrace trace;
    trace.iteration = it;
    trace.best_value = result.value;
    trace.mean_value = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(N);
    trace.elite_threshold = values[order[n_elite - 1]];
    result.trace.push_back(trace);

    CrossEntropyState next =
        refit(state, elite, config.weighted_elite ? std::span<const double>(elite_weights) : std::span<const double>{},
              config.smoothing);
    for (std::size_t v = 0; v < n; ++v) {
      if (!allowed[v]) next.seed_probs[v] = 0.0;
    }
    const double change = next.distance(state);
    state = std::move(next);
    if (change < config.tolerance) {
      result.converged = true;
      break;
    }
  }
  result.final_state = state;
  return result;
}

BestResponseResult best_response_loop(const Network& base, const ProductSet& products,
                                      std::span<const CostModel> costs, std::span<const double> budgets,
                                      int rounds, const CrossEntropyConfig& config, std::uint64_t seed) {
  if (rounds < 1) throw Error(ErrorKind::Config, "rounds must be >= 1");
  const std::size_t P = products.size();
  if (costs.size() != P || budgets.size() != P) {
    throw Error(ErrorKind::Config, fmt::format("need one cost model and budget per product ({})", P));
  }
  BestResponseResult result;
  result.plans.resize(P);
  for (std::size_t p = 0; p < P; ++p) {
    result.plans[p].product = static_cast<int>(p);
    result.plans[p].beta.assign(config.horizon, 0.0);
  }
  std::vector<double> previous(P, std::numeric_limits<double>::quiet_NaN());
  const double tolerance = config.tolerance * static_cast<double>(base.node_count());

  for (int round = 1; round <= rounds; ++round) {
    double max_change = 0.0;
    for (std::size_t p = 0; p < P; ++p) {
      std::vector<ChannelPlan> competitors;
      for (std::size_t q = 0; q < P; ++q) {
        if (q != p) competitors.push_back(result.plans[q]);
      }
      const auto opt = ce_optimize(base, products, static_cast<int>(p), competitors, costs[p], budgets[p], config,
                                   derive_seed(seed, static_cast<std::uint64_t>(round), p));
      result.plans[p] = opt.plan;
      result.trace.push_back({round, static_cast<int>(p), opt.value});
      max_change = std::isnan(previous[p]) ? std::numeric_limits<double>::infinity()
                                           : std::max(max_change, std::abs(opt.value - previous[p]));
      previous[p] = opt.value;
    }
    result.rounds_run = round;
    // A lone product faces no competitor moves, so later rounds cannot improve on the first.
    if (P == 1 || max_change <= tolerance) break;
  }

  const auto augmented = build_augmented(base, products, result.plans, config.gadgets);
  EstimatorConfig cfg;
  cfg.replications = config.replications;
  cfg.seed = derive_seed(seed, kEvaluationTag);
  cfg.workers = config.workers;
  const auto est = estimate_spread(augmented, products, cfg);
  result.spread = est.mean;
  result.spread_stderr = est.std_error;
  return result;
}

}  // namespace adspread
