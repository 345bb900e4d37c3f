#include "adspread/oracle.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace adspread {
namespace {

class RegionEnumerator {
 public:
  RegionEnumerator(const Network& net, const ProductSet& products, ThresholdLaw law, int resolution,
                   std::uint64_t max_branches)
      : net_(net), products_(products), law_(law), m_(resolution), max_branches_(max_branches),
        P_(products.size()), f_(products.dimension()) {
    result_.spread.assign(P_, 0.0);
    result_.node_prob.assign(net.real_node_count() * P_, 0.0);
  }

  ExactSpread run(const SeedAssignment& seeds) {
    const auto init = initial_state(net_, products_, seeds);
    Branch b;
    b.activation_time = init.activation_time;
    b.purchased = init.purchased;
    b.excluded.assign(net_.node_count(), 0.0);
    advance(b, 1, 1.0);
    return std::move(result_);
  }

 private:
  struct Branch {
    std::vector<std::int32_t> activation_time;
    std::vector<std::int32_t> purchased;
    std::vector<double> excluded;  // P(threshold <= largest norm already survived)
  };

  struct Outcome {
    double prob;
    bool activates;
    std::int32_t product;
    double excluded;
  };

  struct Candidate {
    NodeId node;
    std::vector<Outcome> outcomes;
  };

  // P(threshold <= x) under the active law, with the engine's comparison rule.
  double cdf(double x) const {
    if (law_ == ThresholdLaw::Continuous) return std::clamp(x, 0.0, 1.0);
    const double m = static_cast<double>(m_);
    auto mid = [m](long i) { return (static_cast<double>(i) - 0.5) / m; };
    long i = std::clamp(static_cast<long>(std::floor(x * m + 0.5)), 0L, static_cast<long>(m_));
    while (i < m_ && reaches_threshold(x, mid(i + 1))) ++i;
    while (i > 0 && !reaches_threshold(x, mid(i))) --i;
    return static_cast<double>(i) / m;
  }

  void advance(Branch& b, std::int32_t t, double prob) {
    std::vector<Candidate> candidates;
    std::vector<double> agg(f_);
    std::vector<std::size_t> tied(P_);
    const auto flat = products_.flat();
    for (NodeId v = 0; v < net_.node_count(); ++v) {
      if (b.activation_time[v] >= 0) continue;
      std::fill(agg.begin(), agg.end(), 0.0);
      const auto src = net_.in_sources(v);
      const auto w = net_.in_weights(v);
      for (std::size_t i = 0; i < src.size(); ++i) {
        if (b.activation_time[src[i]] < 0) continue;
        const double* pu = flat.data() + static_cast<std::size_t>(b.purchased[src[i]]) * f_;
        for (std::size_t k = 0; k < f_; ++k) agg[k] += w[i] * pu[k];
      }
      const double n = norm(agg);
      if (!(n > 0.0)) continue;

      double p_act;
      double stay_excluded = b.excluded[v];
      if (net_.role(v).is_pseudo()) {
        p_act = reaches_threshold(n, net_.fixed_threshold(v)) ? 1.0 : 0.0;
      } else {
        const double before = b.excluded[v];
        const double now = cdf(n);
        if (now <= before) continue;
        p_act = (now - before) / (1.0 - before);
        stay_excluded = now;
      }
      if (p_act <= 0.0) continue;

      Candidate c{v, {}};
      const std::size_t k = best_products(agg, products_, tied);
      for (std::size_t j = 0; j < k; ++j) {
        c.outcomes.push_back({p_act / static_cast<double>(k), true, static_cast<std::int32_t>(tied[j]), 0.0});
      }
      if (p_act < 1.0) c.outcomes.push_back({1.0 - p_act, false, -1, stay_excluded});
      candidates.push_back(std::move(c));
    }
    if (candidates.empty()) {
      record(b, prob);
      return;
    }
    expand(b, candidates, 0, t, prob, false);
  }

  void expand(Branch& b, const std::vector<Candidate>& cands, std::size_t idx, std::int32_t t, double prob,
              bool any_activation) {
    if (idx == cands.size()) {
      if (any_activation) {
        advance(b, t + 1, prob);
      } else {
        record(b, prob);
      }
      return;
    }
    const Candidate& c = cands[idx];
    const NodeId v = c.node;
    for (const auto& o : c.outcomes) {
      if (o.prob <= 0.0) continue;
      const double saved_excluded = b.excluded[v];
      if (o.activates) {
        b.activation_time[v] = t;
        b.purchased[v] = o.product;
      } else {
        b.excluded[v] = o.excluded;
      }
      expand(b, cands, idx + 1, t, prob * o.prob, any_activation || o.activates);
      b.activation_time[v] = -1;
      b.purchased[v] = -1;
      b.excluded[v] = saved_excluded;
    }
  }

  void record(const Branch& b, double prob) {
    if (++result_.leaves > max_branches_) {
      throw Error(ErrorKind::Config,
                  fmt::format("exact enumeration exceeded {} branches", max_branches_));
    }
    for (std::size_t v = 0; v < net_.real_node_count(); ++v) {
      const auto p = b.purchased[v];
      if (p < 0) continue;
      result_.spread[static_cast<std::size_t>(p)] += prob;
      result_.node_prob[v * P_ + static_cast<std::size_t>(p)] += prob;
    }
  }

  const Network& net_;
  const ProductSet& products_;
  ThresholdLaw law_;
  int m_;
  std::uint64_t max_branches_;
  std::size_t P_;
  std::size_t f_;
  ExactSpread result_;
};

}  // namespace

ExactSpread exact_spread_grid(const Network& net, const ProductSet& products, const SeedAssignment& seeds,
                              const GridSpec& grid) {
  if (grid.resolution < 1) throw Error(ErrorKind::Config, "grid resolution must be >= 1");
  return RegionEnumerator(net, products, ThresholdLaw::Grid, grid.resolution, grid.max_branches).run(seeds);
}

ExactSpread exact_spread_regions(const Network& net, const ProductSet& products, const SeedAssignment& seeds,
                                 std::uint64_t max_branches) {
  return RegionEnumerator(net, products, ThresholdLaw::Continuous, 1, max_branches).run(seeds);
}

std::vector<double> brute_force_spread_grid(const Network& net, const ProductSet& products,
                                            const SeedAssignment& seeds, const GridSpec& grid) {
  const int m = grid.resolution;
  if (m < 1) throw Error(ErrorKind::Config, "grid resolution must be >= 1");
  const std::size_t n = net.real_node_count();
  if (static_cast<double>(n) * std::log2(static_cast<double>(m)) > kBruteForceBits) {
    throw Error(ErrorKind::Config,
                fmt::format("brute-force grid of {}^{} tuples exceeds the {}-bit cap", m, n, kBruteForceBits));
  }
  seeds.check(net, products.size());
  ThresholdAssignment thresholds = sample_thresholds(net, StreamKey{});
  std::vector<int> index(n, 1);
  std::vector<double> total(products.size(), 0.0);
  std::uint64_t tuples = 0;
  DiffusionEngine engine(net, products);
  while (true) {
    for (std::size_t v = 0; v < n; ++v) {
      thresholds.values[v] = (static_cast<double>(index[v]) - 0.5) / static_cast<double>(m);
    }
    const auto& out = engine.run(seeds, thresholds, StreamKey{});
    for (std::size_t p = 0; p < products.size(); ++p) total[p] += static_cast<double>(out.count(p, n));
    ++tuples;
    std::size_t d = 0;
    while (d < n && index[d] == m) index[d++] = 1;
    if (d == n) break;
    ++index[d];
  }
  for (double& x : total) x /= static_cast<double>(tuples);
  return total;
}

Fig3Analytic analytic_fig3(Fig3Variant variant) {
  // a is reached by q with weight 0.6 (and by p with 0.4 when u is seeded):
  // it activates when its threshold is below the aggregate norm and always
  // buys q. v buys p only if a stays inactive and v's threshold is <= 0.3.
  Fig3Analytic out;
  const bool with_u = variant == Fig3Variant::WithU;
  out.p_a_q = with_u ? std::sqrt(0.6 * 0.6 + 0.4 * 0.4) : 0.6;
  out.p_v_p = 0.3 * (1.0 - out.p_a_q);
  const double sure = with_u ? 4.0 : 3.0;  // seeds of p plus the two weight-1 successors
  out.sigma_p = sure + out.p_v_p * 31.0;   // v and its 30 followers
  return out;
}

}  // namespace adspread
