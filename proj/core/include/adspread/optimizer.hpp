#pragma once

// Budget allocation across seeding, social advertising and mass media.
//
// A plan is scored by the expected number of Real nodes buying the focal
// product given fixed competitor plans. Plans are searched with the
// cross-entropy method: sample plans from a parametric distribution
// (Bernoulli per candidate seed, rectified normals for alpha and each
// beta_t), keep the best fraction, refit the distribution to them, smooth,
// and repeat.

#include <cstdint>
#include <span>
#include <vector>

#include "adspread/channels.hpp"
#include "adspread/estimator.hpp"

namespace adspread {

struct CostModel {
  double seed_unit_cost = 1.0;
  double alpha_unit_cost = 1.0;
  double beta_unit_cost = 1.0;
};

/// seed_cost * |S| + alpha_cost * alpha + beta_cost * sum_t beta_t.
double plan_cost(const ChannelPlan& plan, const CostModel& cm);

struct CrossEntropyConfig {
  std::size_t samples = 0;        // per iteration; 0 = max(100, 2n)
  double elite_fraction = 0.1;
  double smoothing = 0.7;         // weight of the refit in the smoothed update
  int max_iterations = 30;
  double tolerance = 1e-3;        // max parameter change that counts as converged
  std::uint64_t replications = 10'000;  // Monte Carlo runs per plan evaluation
  unsigned workers = 0;
  bool weighted_elite = false;    // weight elite samples by objective value
  std::size_t horizon = 0;        // T of the focal plan
  int max_seed_retries = 100;
  GadgetOptions gadgets;
};

struct CrossEntropyState {
  std::vector<double> seed_probs;  // per Real node
  double alpha_mean = 0.0;
  double alpha_std = 0.0;
  std::vector<double> beta_mean;   // per step
  std::vector<double> beta_std;
  int iteration = 0;

  /// Largest absolute difference over every parameter.
  double distance(const CrossEntropyState& other) const;
};

/// Initial distribution: seed probabilities that spend about half the budget
/// on seeds in expectation, continuous means splitting the rest, std = mean.
/// Nodes with allowed[v] == 0 (e.g. competitor seeds) never get sampled.
CrossEntropyState initial_ce_state(std::size_t real_nodes, std::span<const std::uint8_t> allowed,
                                   const CostModel& cm, double budget, std::size_t horizon);

/// Draws a plan with cost <= budget: seeds are redrawn (up to `max_retries`
/// times) while seed cost alone exceeds the budget, then alpha and beta are
/// scaled down together to fit the remainder. Throws Error(Infeasible).
ChannelPlan sample_plan(const CrossEntropyState& state, const CostModel& cm, double budget,
                        PhiloxStream& rng, int product, int max_retries = 100);

/// Maximum-likelihood refit on the elite plans, blended into `previous` with
/// weight `smoothing`. `weights` may be empty (uniform).
CrossEntropyState refit(const CrossEntropyState& previous, std::span<const ChannelPlan> elite,
                        std::span<const double> weights, double smoothing);

struct IterationTrace {
  int iteration = 0;
  double best_value = 0.0;   // best objective seen so far
  double mean_value = 0.0;   // mean objective of this iteration's samples
  double elite_threshold = 0.0;
};

struct OptimizeResult {
  ChannelPlan plan;
  double value = 0.0;
  std::vector<IterationTrace> trace;
  CrossEntropyState final_state;
  bool converged = false;
  std::size_t evaluations = 0;
};

/// Expected spread of `focal` when `plan` plays against `competitors`.
/// Evaluations share the estimator seed (common random numbers).
double evaluate_plan(const Network& base, const ProductSet& products, const ChannelPlan& plan,
                     std::span<const ChannelPlan> competitors, std::uint64_t replications,
                     std::uint64_t seed, const GadgetOptions& gadgets = {});

OptimizeResult ce_optimize(const Network& base, const ProductSet& products, int focal,
                           std::span<const ChannelPlan> competitor_plans, const CostModel& cm,
                           double budget, const CrossEntropyConfig& config, std::uint64_t seed);

struct BestResponseRound {
  int round = 0;
  int product = 0;
  double value = 0.0;  // focal objective after this product's update
};

struct BestResponseResult {
  std::vector<ChannelPlan> plans;     // per product
  std::vector<double> spread;         // joint spread of the final plans
  std::vector<double> spread_stderr;
  std::vector<BestResponseRound> trace;
  int rounds_run = 0;
};

/// Round-robin best responses starting from empty plans. Stops after `rounds`
/// rounds, or earlier once no product's objective moved by more than
/// config.tolerance * real node count in a full round.
BestResponseResult best_response_loop(const Network& base, const ProductSet& products,
                                      std::span<const CostModel> costs, std::span<const double> budgets,
                                      int rounds, const CrossEntropyConfig& config, std::uint64_t seed);

}  // namespace adspread
