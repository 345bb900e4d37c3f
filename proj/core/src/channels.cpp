#include "adspread/channels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>

#include <fmt/format.h>
#include "json.hpp"

#include "adspread/io.hpp"

namespace adspread {

double ChannelPlan::beta_total() const { return std::accumulate(beta.begin(), beta.end(), 0.0); }

double scaling_ratio(const Network& base, NodeId v, std::span<const ChannelPlan> plans) {
  const auto src = base.in_sources(v);
  const auto w = base.in_weights(v);
  double residual = 1.0;
  double similar = 0.0;  // sum over influence neighbours of h_uv
  for (std::size_t i = 0; i < src.size(); ++i) {
    residual -= w[i];
    similar += base.similarity(src[i], v);
  }
  double denominator = 0.0;
  for (const auto& plan : plans) denominator += plan.alpha * similar + plan.beta_total();
  if (!(denominator > 0.0)) return 0.0;
  return std::max(residual, 0.0) / denominator;
}

std::vector<NodeId> AugmentedNetwork::gadgets() const {
  std::vector<NodeId> out;
  for (NodeId v = static_cast<NodeId>(real_nodes); v < net.node_count(); ++v) {
    if (net.role(v).kind == NodeKind::SocialGadget) out.push_back(v);
  }
  return out;
}

AugmentationBuilder::AugmentationBuilder(const Network& base, const ProductSet& products,
                                         std::span<const ChannelPlan> plans, const GadgetOptions& options)
    : base_(base), plans_(plans), options_(options), builder_(base) {
  if (base.real_node_count() != base.node_count()) {
    throw Error(ErrorKind::Config, "augmentation expects a base network without pseudonodes");
  }
  if (!(options.gadget_epsilon > 0.0 && options.gadget_epsilon < options.gadget_threshold &&
        options.gadget_threshold <= 1.0)) {
    throw Error(ErrorKind::Config, "gadget parameters must satisfy 0 < eps < chi_w <= 1");
  }
  if (!(options.media_threshold > 0.0 && options.media_threshold <= 1.0)) {
    throw Error(ErrorKind::Config, "media chain threshold must lie in (0,1]");
  }
  plan_by_product_.assign(products.size(), nullptr);
  for (const auto& plan : plans) {
    if (plan.product < 0 || static_cast<std::size_t>(plan.product) >= products.size()) {
      throw Error(ErrorKind::Config, fmt::format("plan names unknown product {}", plan.product));
    }
    if (plan_by_product_[plan.product] != nullptr) {
      throw Error(ErrorKind::Config, fmt::format("two plans for product {}", plan.product));
    }
    if (plan.horizon() != plans.front().horizon()) {
      throw Error(ErrorKind::Config, "all plans must share one horizon T");
    }
    if (!(plan.alpha >= 0.0) ||
        std::any_of(plan.beta.begin(), plan.beta.end(), [](double b) { return !(b >= 0.0); })) {
      throw Error(ErrorKind::Config, fmt::format("plan of product {} has a negative budget", plan.product));
    }
    plan_by_product_[plan.product] = &plan;
  }

  result_.real_nodes = base.node_count();
  result_.horizon = plans.empty() ? 0 : plans.front().horizon();
  result_.scale_factors.resize(base.node_count());
  for (NodeId v = 0; v < base.node_count(); ++v) result_.scale_factors[v] = scaling_ratio(base, v, plans);

  result_.product_roots.resize(products.size());
  result_.media_chains.resize(products.size());
  for (std::size_t p = 0; p < products.size(); ++p) {
    const NodeId root = builder_.add_node(NodeRole::product_root(static_cast<int>(p)), options_.media_threshold);
    result_.product_roots[p] = root;
    result_.media_chains[p].push_back(root);
  }
  // Chains run up to the last scheduled step; unused tail nodes would be dead weight.
  for (std::size_t p = 0; p < products.size(); ++p) {
    const ChannelPlan* plan = plan_by_product_[p];
    if (plan == nullptr) continue;
    std::size_t last = 0;
    for (std::size_t t = 1; t <= plan->horizon(); ++t) {
      if (plan->beta[t - 1] > 0.0) last = t;
    }
    for (std::size_t t = 2; t <= last; ++t) chain_node(static_cast<int>(p), t);
  }

  result_.seeds.by_product.resize(products.size());
  for (const auto& plan : plans) {
    auto& seeds = result_.seeds.by_product[plan.product];
    seeds = plan.seeds;
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
    for (NodeId s : seeds) {
      if (s >= base.node_count()) {
        throw Error(ErrorKind::Config, fmt::format("seed {} of product {} is not a Real node", s, plan.product));
      }
    }
  }
}

const ChannelPlan* AugmentationBuilder::plan_of(int product) const {
  if (product < 0 || static_cast<std::size_t>(product) >= plan_by_product_.size()) {
    throw Error(ErrorKind::Config, fmt::format("unknown product {}", product));
  }
  return plan_by_product_[product];
}

NodeId AugmentationBuilder::chain_node(int product, std::size_t t) {
  auto& chain = result_.media_chains[product];
  while (chain.size() < t) {
    const int step = static_cast<int>(chain.size()) + 1;
    const NodeId node = builder_.add_node(NodeRole::media_chain(product, step), options_.media_threshold);
    builder_.add_edge(chain.back(), node, 1.0);
    chain.push_back(node);
  }
  return chain[t - 1];
}

void AugmentationBuilder::attach_mass_media(int product, NodeId v) {
  const ChannelPlan* plan = plan_of(product);
  if (plan == nullptr || v >= base_.node_count()) return;
  const double ratio = result_.scale_factors[v];
  for (std::size_t t = 1; t <= plan->horizon(); ++t) {
    const double weight = ratio * plan->beta[t - 1];
    if (weight > 0.0) builder_.add_edge(chain_node(product, t), v, weight);
  }
}

NodeId AugmentationBuilder::attach_social_gadget(int product, NodeId u, NodeId v) {
  const ChannelPlan* plan = plan_of(product);
  if (plan == nullptr || u >= base_.node_count() || v >= base_.node_count()) return kNoNode;
  const double weight = result_.scale_factors[v] * plan->alpha * base_.similarity(u, v);
  if (!(weight > 0.0)) return kNoNode;
  const double chi = options_.gadget_threshold;
  const double eps = options_.gadget_epsilon;
  const NodeId w = builder_.add_node(NodeRole::social_gadget(product, u, v), chi);
  builder_.add_edge(result_.product_roots[product], w, chi - eps);
  builder_.add_edge(u, w, eps);
  builder_.add_edge(w, v, weight);
  return w;
}

AugmentedNetwork AugmentationBuilder::finish() {
  result_.net = builder_.build();
  if (auto violations = validate(result_.net); !violations.empty()) {
    std::ostringstream msg;
    msg << "augmented network is invalid:";
    for (const auto& v : violations) msg << "\n  " << v.message;
    throw Error(ErrorKind::Validation, msg.str());
  }
  result_.seeds.check(result_.net, result_.product_roots.size());
  return std::move(result_);
}

AugmentedNetwork build_augmented(const Network& base, const ProductSet& products,
                                 std::span<const ChannelPlan> plans, const GadgetOptions& options) {
  if (auto violations = validate(base); !violations.empty()) {
    std::ostringstream msg;
    msg << "base network is invalid:";
    for (const auto& v : violations) msg << "\n  " << v.message;
    throw Error(ErrorKind::Validation, msg.str());
  }
  AugmentationBuilder builder(base, products, plans, options);
  for (const auto& plan : plans) {
    for (NodeId v = 0; v < base.node_count(); ++v) builder.attach_mass_media(plan.product, v);
  }
  for (const auto& edge : base.edges()) {
    for (const auto& plan : plans) builder.attach_social_gadget(plan.product, edge.src, edge.dst);
  }
  return builder.finish();
}

GadgetTrialResult run_gadget_trial(const GadgetTrial& trial) {
  constexpr NodeId u = 0;
  constexpr NodeId v = 1;
  NetworkBuilder b(2);
  b.add_edge(u, v, 0.5);
  b.set_similarity(u, v, 1.0);
  const Network base = b.build();

  const std::array<double, 2> p{1.0, 0.0};
  const std::array<double, 2> q{std::cos(trial.theta), std::sin(trial.theta)};
  const ProductSet products({normalize_product(p, 1, 0), normalize_product(q, 1, 1)});
  std::vector<ChannelPlan> plans{ChannelPlan{0, {}, 1.0, {}}, ChannelPlan{1, {}, 0.0, {}}};
  plans[trial.friend_buys_focal ? 0 : 1].seeds = {u};

  GadgetOptions options;
  options.gadget_threshold = trial.threshold;
  options.gadget_epsilon = trial.epsilon;
  const auto aug = build_augmented(base, products, plans, options);
  const auto gadgets = aug.gadgets();
  if (gadgets.size() != 1) throw Error(ErrorKind::Internal, "gadget trial: expected exactly one gadget");
  const NodeId w = gadgets.front();

  DiffusionEngine engine(aug.net, products);
  const auto& out = engine.run(aug.seeds, StreamKey{});
  GadgetTrialResult r;
  r.activation_time = out.activation_time[w];
  r.activated = r.activation_time >= 0;
  r.holds = r.activated == trial.friend_buys_focal &&
            (!r.activated || (r.activation_time == 1 && out.purchased[w] == 0));
  return r;
}

std::vector<ChannelPlan> parse_plans(const std::string& json_text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, fmt::format("plans: {}", e.what()));
  }
  std::vector<ChannelPlan> plans;
  try {
    const std::size_t horizon = doc.at("horizon").get<std::size_t>();
    for (const auto& item : doc.at("plans")) {
      ChannelPlan plan;
      plan.product = item.at("product").get<int>();
      plan.seeds = item.value("seeds", std::vector<NodeId>{});
      plan.alpha = item.value("alpha", 0.0);
      plan.beta = item.value("beta", std::vector<double>(horizon, 0.0));
      if (plan.beta.size() != horizon) {
        throw Error(ErrorKind::Parse, fmt::format("plans: product {} has {} beta entries, horizon is {}",
                                                  plan.product, plan.beta.size(), horizon));
      }
      plans.push_back(std::move(plan));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, fmt::format("plans: {}", e.what()));
  }
  return plans;
}

std::vector<ChannelPlan> load_plans(const std::filesystem::path& path) {
  try {
    return parse_plans(read_text_file(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Parse) throw Error(ErrorKind::Parse, path.string() + ": " + e.what());
    throw;
  }
}

std::string format_plans(std::span<const ChannelPlan> plans) {
  nlohmann::ordered_json doc;
  doc["horizon"] = plans.empty() ? 0 : plans.front().horizon();
  doc["plans"] = nlohmann::ordered_json::array();
  for (const auto& plan : plans) {
    nlohmann::ordered_json item;
    item["product"] = plan.product;
    item["seeds"] = plan.seeds;
    item["alpha"] = plan.alpha;
    item["beta"] = plan.beta;
    doc["plans"].push_back(item);
  }
  return doc.dump(2) + "\n";
}

std::string format_provenance(const AugmentedNetwork& augmented) {
  nlohmann::ordered_json doc;
  doc["real_nodes"] = augmented.real_nodes;
  doc["pseudonodes"] = nlohmann::ordered_json::array();
  for (NodeId v = static_cast<NodeId>(augmented.real_nodes); v < augmented.net.node_count(); ++v) {
    const auto& role = augmented.net.role(v);
    nlohmann::ordered_json item;
    item["id"] = v;
    item["role"] = to_string(role.kind);
    item["product"] = role.product;
    if (role.kind == NodeKind::ProductRoot || role.kind == NodeKind::MediaChain) item["step"] = role.step;
    if (role.kind == NodeKind::SocialGadget) {
      item["src"] = role.src;
      item["dst"] = role.dst;
    }
    item["threshold"] = augmented.net.fixed_threshold(v);
    doc["pseudonodes"].push_back(item);
  }
  return doc.dump(2) + "\n";
}

}  // namespace adspread
