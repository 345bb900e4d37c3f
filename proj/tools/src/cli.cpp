#include "cli.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <iostream>
#include <numbers>
#include <sstream>

#include <fmt/format.h>
#include "CLI11.hpp"
#include "json.hpp"

#include "adspread/fixtures.hpp"
#include "adspread/io.hpp"
#include "adspread/oracle.hpp"
#include "adspread/parallel.hpp"
#include "adspread/version.hpp"

namespace adspread::cli {
namespace {

using Json = nlohmann::ordered_json;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string unquote(std::string s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

double to_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size() || !std::isfinite(out)) {
    throw Error(ErrorKind::Config, fmt::format("{}: expected a number, got '{}'", key, value));
  }
  return out;
}

template <typename Int>
Int to_int(const std::string& key, const std::string& value) {
  Int out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw Error(ErrorKind::Config, fmt::format("{}: expected an integer, got '{}'", key, value));
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw Error(ErrorKind::Config, fmt::format("{}: expected true or false, got '{}'", key, value));
}

std::vector<double> to_list(const std::string& key, std::string value) {
  if (!value.empty() && value.front() == '[' && value.back() == ']') value = value.substr(1, value.size() - 2);
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
  if (out.empty()) throw Error(ErrorKind::Config, fmt::format("{}: empty list", key));
  return out;
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& value,
                   const std::filesystem::path& base_dir) {
  auto path = [&] { return base_dir / std::filesystem::path(value); };
  if (key == "net") c.network = path();
  else if (key == "sim") c.similarity = path();
  else if (key == "products") c.products = path();
  else if (key == "plans") c.plans = path();
  else if (key == "seed") c.seed = to_int<std::uint64_t>(key, value);
  else if (key == "reps") c.replications = to_int<std::uint64_t>(key, value);
  else if (key == "budget") c.budgets = to_list(key, value);
  else if (key == "focal") c.focal = to_int<int>(key, value);
  else if (key == "rounds") c.rounds = to_int<int>(key, value);
  else if (key == "grid") c.grid = to_int<int>(key, value);
  else if (key == "workers") c.workers = to_int<unsigned>(key, value);
  else if (key == "trajectory") c.trajectory = to_bool(key, value);
  else if (key == "per_node") c.per_node = to_bool(key, value);
  else if (key == "cost.seed") c.cost.seed_unit_cost = to_double(key, value);
  else if (key == "cost.alpha") c.cost.alpha_unit_cost = to_double(key, value);
  else if (key == "cost.beta") c.cost.beta_unit_cost = to_double(key, value);
  else if (key == "ce.samples") c.ce.samples = to_int<std::size_t>(key, value);
  else if (key == "ce.elite_fraction") c.ce.elite_fraction = to_double(key, value);
  else if (key == "ce.smoothing") c.ce.smoothing = to_double(key, value);
  else if (key == "ce.max_iterations") c.ce.max_iterations = to_int<int>(key, value);
  else if (key == "ce.tolerance") c.ce.tolerance = to_double(key, value);
  else if (key == "ce.weighted_elite") c.ce.weighted_elite = to_bool(key, value);
  else if (key == "ce.max_seed_retries") c.ce.max_seed_retries = to_int<int>(key, value);
  else if (key == "ce.horizon") {
    c.ce.horizon = to_int<std::size_t>(key, value);
    c.horizon_set = true;
  }
  else if (key == "gadget.threshold") c.ce.gadgets.gadget_threshold = to_double(key, value);
  else if (key == "gadget.epsilon") c.ce.gadgets.gadget_epsilon = to_double(key, value);
  else if (key == "gadget.media_threshold") c.ce.gadgets.media_threshold = to_double(key, value);
  else throw Error(ErrorKind::Config, fmt::format("unknown config key '{}'", key));
}

std::string hex64(std::uint64_t x) { return fmt::format("{:016x}", x); }

struct Inputs {
  Network net;
  ProductSet products;
  std::vector<ChannelPlan> plans;
};

Inputs load_inputs(const RunConfig& c) {
  Inputs in;
  in.net = load_network(c.network, c.similarity);
  in.products = load_products(c.products).products;
  if (!c.plans.empty()) in.plans = load_plans(c.plans);
  return in;
}

class Artifacts {
 public:
  explicit Artifacts(const RunConfig& c)
      : dir_(c.out_dir), seed_(c.seed), hash_(hex64(fnv1a64(canonical_config(c)))) {}

  Json header(const std::string& subcommand) const {
    Json j;
    j["version"] = kVersion;
    j["subcommand"] = subcommand;
    j["seed"] = seed_;
    j["config_hash"] = hash_;
    return j;
  }

  std::string csv_preamble() const {
    return fmt::format("# adspread {} seed={} config_hash={}\n", kVersion, seed_, hash_);
  }

  void json(const std::string& name, const Json& j) { files_.emplace_back(name, j.dump(2) + "\n"); }
  void text(const std::string& name, std::string body) { files_.emplace_back(name, std::move(body)); }

  /// Everything is computed before the first write, so a failed run leaves
  /// no outputs behind.
  void commit(unsigned workers) {
    Json meta;
    meta["version"] = kVersion;
    meta["config_hash"] = hash_;
    meta["timestamp"] = timestamp();
    meta["workers"] = workers;
    files_.emplace_back("metadata.json", meta.dump(2) + "\n");
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw Error(ErrorKind::Io, fmt::format("cannot create {}: {}", dir_.string(), ec.message()));
    for (const auto& [name, body] : files_) write_file_atomic(dir_ / name, body);
  }

 private:
  static std::string timestamp() {
    const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
  }

  std::filesystem::path dir_;
  std::uint64_t seed_;
  std::string hash_;
  std::vector<std::pair<std::string, std::string>> files_;
};

Json plans_json(std::span<const ChannelPlan> plans, const Json& header) {
  Json j = Json::parse(format_plans(plans));
  for (const auto& [k, v] : header.items()) j[k] = v;
  return j;
}

Json spread_json(const SpreadEstimate& est) {
  Json arr = Json::array();
  for (std::size_t p = 0; p < est.mean.size(); ++p) {
    arr.push_back({{"product", p}, {"mean", est.mean[p]}, {"std_error", est.std_error[p]}});
  }
  return arr;
}

double budget_for(const RunConfig& c, std::size_t product) {
  if (c.budgets.size() == 1) return c.budgets.front();
  if (product >= c.budgets.size()) {
    throw Error(ErrorKind::Config, fmt::format("no budget given for product {}", product));
  }
  return c.budgets[product];
}

CrossEntropyConfig ce_config(const RunConfig& c, std::span<const ChannelPlan> plans) {
  CrossEntropyConfig ce = c.ce;
  ce.replications = c.replications;
  ce.workers = c.workers;
  if (!c.horizon_set && !plans.empty()) ce.horizon = plans.front().horizon();
  return ce;
}

void cmd_simulate(const RunConfig& c, Artifacts& out) {
  const Inputs in = load_inputs(c);
  const auto aug = build_augmented(in.net, in.products, in.plans, c.ce.gadgets);
  EstimatorConfig cfg;
  cfg.replications = c.replications;
  cfg.seed = c.seed;
  cfg.workers = c.workers;
  cfg.per_node = c.per_node;
  const auto est = estimate_spread(aug, in.products, cfg);

  Json j = out.header("simulate");
  j["replications"] = est.replications;
  j["real_nodes"] = est.real_nodes;
  j["pseudonodes"] = aug.net.node_count() - aug.real_nodes;
  j["spread"] = spread_json(est);
  if (c.per_node) {
    Json nodes = Json::array();
    for (NodeId v = 0; v < est.real_nodes; ++v) {
      Json probs = Json::array();
      for (std::size_t p = 0; p < in.products.size(); ++p) probs.push_back(est.probability(v, p));
      nodes.push_back({{"node", v}, {"probability", probs}});
    }
    j["per_node"] = nodes;
  }
  out.json("result.json", j);
  out.text("pseudo.json", format_provenance(aug));
  if (c.trajectory) {
    DiffusionEngine engine(aug.net, in.products);
    out.text("trajectory.csv", out.csv_preamble() + format_trajectory(engine.run(aug.seeds, StreamKey{c.seed, 0})));
  }
}

void cmd_optimize(const RunConfig& c, Artifacts& out) {
  const Inputs in = load_inputs(c);
  std::vector<ChannelPlan> competitors;
  for (const auto& plan : in.plans) {
    if (plan.product != c.focal) competitors.push_back(plan);
  }
  const auto ce = ce_config(c, competitors);
  const double budget = budget_for(c, static_cast<std::size_t>(std::max(c.focal, 0)));
  const auto res = ce_optimize(in.net, in.products, c.focal, competitors, c.cost, budget, ce, c.seed);

  std::vector<ChannelPlan> all = competitors;
  all.push_back(res.plan);
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.product < b.product; });

  Json j = out.header("optimize");
  j["focal"] = c.focal;
  j["budget"] = budget;
  j["value"] = res.value;
  j["cost"] = plan_cost(res.plan, c.cost);
  j["converged"] = res.converged;
  j["iterations"] = res.trace.size();
  j["evaluations"] = res.evaluations;
  j["replications"] = ce.replications;
  out.json("result.json", j);
  out.json("plans.json", plans_json(all, out.header("optimize")));
  std::string trace = out.csv_preamble() + "iteration,best_value,mean_value,elite_threshold\n";
  for (const auto& t : res.trace) {
    trace += fmt::format("{},{},{},{}\n", t.iteration, format_number(t.best_value), format_number(t.mean_value),
                         format_number(t.elite_threshold));
  }
  out.text("trace.csv", trace);
}

void cmd_best_response(const RunConfig& c, Artifacts& out) {
  const Inputs in = load_inputs(c);
  const std::size_t P = in.products.size();
  std::vector<CostModel> costs(P, c.cost);
  std::vector<double> budgets(P);
  for (std::size_t p = 0; p < P; ++p) budgets[p] = budget_for(c, p);
  const auto ce = ce_config(c, in.plans);
  const auto res = best_response_loop(in.net, in.products, costs, budgets, c.rounds, ce, c.seed);

  Json j = out.header("best-response");
  j["rounds_run"] = res.rounds_run;
  j["replications"] = ce.replications;
  Json spread = Json::array();
  for (std::size_t p = 0; p < P; ++p) {
    spread.push_back({{"product", p},
                      {"budget", budgets[p]},
                      {"cost", plan_cost(res.plans[p], costs[p])},
                      {"mean", res.spread[p]},
                      {"std_error", res.spread_stderr[p]}});
  }
  j["spread"] = spread;
  out.json("result.json", j);
  out.json("plans.json", plans_json(res.plans, out.header("best-response")));
  std::string trace = out.csv_preamble() + "round,product,value\n";
  for (const auto& t : res.trace) trace += fmt::format("{},{},{}\n", t.round, t.product, format_number(t.value));
  out.text("trace.csv", trace);
}

void cmd_oracle(const RunConfig& c, Artifacts& out) {
  const Inputs in = load_inputs(c);
  const auto aug = build_augmented(in.net, in.products, in.plans, c.ce.gadgets);
  GridSpec grid;
  grid.resolution = c.grid;
  const auto exact = exact_spread_grid(aug.net, in.products, aug.seeds, grid);
  EstimatorConfig cfg;
  cfg.replications = c.replications;
  cfg.seed = c.seed;
  cfg.workers = c.workers;
  const auto est = estimate_spread(aug, in.products, cfg);

  const double discretization = 2.0 * static_cast<double>(aug.real_nodes) / static_cast<double>(c.grid);
  Json j = out.header("oracle");
  j["grid"] = c.grid;
  j["replications"] = c.replications;
  j["branches"] = exact.leaves;
  Json rows = Json::array();
  bool all_agree = true;
  for (std::size_t p = 0; p < in.products.size(); ++p) {
    const double tol = 4.0 * est.std_error[p] + discretization;
    const bool agree = std::abs(est.mean[p] - exact.spread[p]) <= tol;
    all_agree = all_agree && agree;
    rows.push_back({{"product", p},
                    {"oracle", exact.spread[p]},
                    {"engine_mean", est.mean[p]},
                    {"engine_std_error", est.std_error[p]},
                    {"tolerance", tol},
                    {"agree", agree}});
  }
  j["comparison"] = rows;
  j["agree"] = all_agree;
  out.json("result.json", j);
}

void cmd_gadget_check(const RunConfig& c, Artifacts& out) {
  std::uint64_t failures = 0;
  std::uint64_t focal_trials = 0;
  Json examples = Json::array();
  for (std::uint64_t i = 0; i < c.replications; ++i) {
    PhiloxStream rng(StreamKey{c.seed, static_cast<std::uint32_t>(i)}, StreamPurpose::Property, 0, 0);
    GadgetTrial t;
    t.threshold = 1.0 - uniform01(rng);                         // (0, 1]
    t.epsilon = t.threshold * (0.01 + 0.98 * uniform01(rng));  // strictly inside (0, chi_w)
    t.theta = std::numbers::pi / 2 * (1.0 - uniform01(rng));    // (0, pi/2]
    t.friend_buys_focal = uniform_index(rng, 2) == 0;
    focal_trials += t.friend_buys_focal ? 1 : 0;
    const auto r = run_gadget_trial(t);
    if (!r.holds) {
      ++failures;
      if (examples.size() < 10) {
        examples.push_back({{"threshold", t.threshold},
                            {"epsilon", t.epsilon},
                            {"theta", t.theta},
                            {"friend_buys_focal", t.friend_buys_focal},
                            {"activation_time", r.activation_time}});
      }
    }
  }
  Json j = out.header("gadget-check");
  j["trials"] = c.replications;
  j["focal_trials"] = focal_trials;
  j["counterexamples"] = failures;
  j["examples"] = examples;
  out.json("result.json", j);
}

void cmd_fixtures(const RunConfig& c, Artifacts& out) {
  generate_fixtures(c.out_dir);
  Json j = out.header("fixtures");
  j["directories"] = {"fig2", "fig3"};
  out.json("manifest.json", j);
}

void require_file(const std::filesystem::path& p, const char* what) {
  if (p.empty()) throw Error(ErrorKind::Config, fmt::format("missing required --{}", what));
  if (!std::filesystem::is_regular_file(p)) {
    throw Error(ErrorKind::Config, fmt::format("{} file not found: {}", what, p.string()));
  }
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config:
    case ErrorKind::Parse:
    case ErrorKind::Validation: return kConfigError;
    case ErrorKind::Io: return kIoError;
    case ErrorKind::Infeasible: return kInfeasible;
    case ErrorKind::Internal: return kInternalError;
  }
  return kInternalError;
}

void report(std::string_view kind, const std::string& message, int code) {
  Json j;
  j["error"] = {{"kind", kind}, {"message", message}, {"exit_code", code}};
  std::cerr << j.dump() << '\n';
}

}  // namespace

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

void apply_config_text(RunConfig& config, std::string_view text, const std::filesystem::path& base_dir) {
  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw Error(ErrorKind::Config, fmt::format("config line {}: bad section", line_no));
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::Config, fmt::format("config line {}: expected key = value", line_no));
    }
    std::string key = trim(std::string_view(line).substr(0, eq));
    if (!section.empty()) key = section + "." + key;
    try {
      apply_setting(config, key, unquote(trim(std::string_view(line).substr(eq + 1))), base_dir);
    } catch (const Error& e) {
      throw Error(ErrorKind::Config, fmt::format("config line {}: {}", line_no, e.what()));
    }
  }
}

std::string canonical_config(const RunConfig& c) {
  std::string budgets;
  for (double b : c.budgets) budgets += (budgets.empty() ? "" : ",") + format_number(b);
  const auto& g = c.ce.gadgets;
  return fmt::format(
      "subcommand={}\nnet={}\nsim={}\nproducts={}\nplans={}\nseed={}\nreps={}\nbudget={}\nfocal={}\nrounds={}\n"
      "grid={}\ntrajectory={}\nper_node={}\ncost.seed={}\ncost.alpha={}\ncost.beta={}\nce.samples={}\n"
      "ce.elite_fraction={}\nce.smoothing={}\nce.max_iterations={}\nce.tolerance={}\nce.weighted_elite={}\n"
      "ce.max_seed_retries={}\nce.horizon={}\ngadget.threshold={}\ngadget.epsilon={}\ngadget.media_threshold={}\n",
      c.subcommand, c.network.generic_string(), c.similarity.generic_string(), c.products.generic_string(),
      c.plans.generic_string(), c.seed, c.replications, budgets, c.focal, c.rounds, c.grid, c.trajectory,
      c.per_node, format_number(c.cost.seed_unit_cost), format_number(c.cost.alpha_unit_cost),
      format_number(c.cost.beta_unit_cost), c.ce.samples, format_number(c.ce.elite_fraction),
      format_number(c.ce.smoothing), c.ce.max_iterations, format_number(c.ce.tolerance), c.ce.weighted_elite,
      c.ce.max_seed_retries, c.horizon_set ? std::to_string(c.ce.horizon) : "auto",
      format_number(g.gadget_threshold), format_number(g.gadget_epsilon), format_number(g.media_threshold));
}

std::optional<RunConfig> parse_command_line(int argc, const char* const* argv) {
  CLI::App app{"Competitive multi-feature diffusion with channel budgets", "adspread"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  struct Flags {
    std::optional<std::string> net, sim, products, plans, config, out, budget;
    std::optional<std::uint64_t> seed, reps;
    std::optional<int> focal, rounds, grid;
    std::optional<unsigned> workers;
    std::optional<std::size_t> horizon;
    bool trajectory = false, per_node = false;
  } f;

  const std::vector<std::pair<std::string, std::string>> commands{
      {"simulate", "Monte Carlo spread of the given plans"},
      {"optimize", "cross-entropy best plan for the focal product"},
      {"best-response", "round-robin best responses for every product"},
      {"oracle", "compare the engine with exact grid enumeration"},
      {"gadget-check", "random property check of the social-ad gadget"},
      {"fixtures", "write the fig2/ and fig3/ example instances"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--net", f.net, "edge list file");
    sub->add_option("--sim", f.sim, "similarity file");
    sub->add_option("--products", f.products, "product feature file");
    sub->add_option("--plans", f.plans, "plans JSON");
    sub->add_option("--seed", f.seed, "master seed");
    sub->add_option("--reps", f.reps, "Monte Carlo replications (trials for gadget-check)");
    sub->add_option("--budget", f.budget, "budget, or comma-separated budgets per product");
    sub->add_option("--config", f.config, "key = value config file");
    sub->add_option("--out", f.out, "output directory");
    sub->add_option("--focal", f.focal, "focal product for optimize");
    sub->add_option("--rounds", f.rounds, "best-response rounds");
    sub->add_option("--grid", f.grid, "oracle grid resolution");
    sub->add_option("--workers", f.workers, std::string("worker threads (overrides ") + kWorkersEnv + ")");
    sub->add_option("--horizon", f.horizon, "media horizon T for optimized plans");
    sub->add_flag("--trajectory", f.trajectory, "write one trajectory CSV");
    sub->add_flag("--per-node", f.per_node, "report per-node purchase probabilities");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return std::nullopt;
  } catch (const CLI::CallForVersion&) {
    std::cout << kVersion << '\n';
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw Error(ErrorKind::Config, e.what());
  }
  for (auto* sub : app.get_subcommands()) {
    if (sub->get_help_ptr() != nullptr && sub->get_help_ptr()->count() > 0) {
      std::cout << sub->help();
      return std::nullopt;
    }
  }

  RunConfig c;
  c.subcommand = app.get_subcommands().front()->get_name();
  if (f.config) {
    const std::filesystem::path cfg(*f.config);
    if (!std::filesystem::is_regular_file(cfg)) {
      throw Error(ErrorKind::Config, fmt::format("config file not found: {}", cfg.string()));
    }
    apply_config_text(c, read_text_file(cfg), cfg.parent_path());
  }
  if (f.net) c.network = *f.net;
  if (f.sim) c.similarity = *f.sim;
  if (f.products) c.products = *f.products;
  if (f.plans) c.plans = *f.plans;
  if (f.out) c.out_dir = *f.out;
  if (f.seed) c.seed = *f.seed;
  if (f.reps) c.replications = *f.reps;
  if (f.budget) c.budgets = to_list("--budget", *f.budget);
  if (f.focal) c.focal = *f.focal;
  if (f.rounds) c.rounds = *f.rounds;
  if (f.grid) c.grid = *f.grid;
  if (f.workers) c.workers = *f.workers;
  if (f.horizon) {
    c.ce.horizon = *f.horizon;
    c.horizon_set = true;
  }
  c.trajectory = c.trajectory || f.trajectory;
  c.per_node = c.per_node || f.per_node;
  return c;
}

void validate_config(const RunConfig& c) {
  const auto& s = c.subcommand;
  const bool needs_graph = s == "simulate" || s == "optimize" || s == "best-response" || s == "oracle";
  if (needs_graph) {
    require_file(c.network, "net");
    require_file(c.products, "products");
    if (!c.similarity.empty()) require_file(c.similarity, "sim");
  }
  if (s == "simulate" || s == "oracle") require_file(c.plans, "plans");
  if (s == "optimize" && !c.plans.empty()) require_file(c.plans, "plans");
  if (s == "optimize" || s == "best-response") {
    if (c.budgets.empty()) throw Error(ErrorKind::Config, "missing required --budget");
    for (double b : c.budgets) {
      if (b < 0.0) throw Error(ErrorKind::Config, "budgets must be >= 0");
    }
  }
  if (c.replications == 0 && s != "fixtures") throw Error(ErrorKind::Config, "--reps must be >= 1");
  if (c.rounds < 1) throw Error(ErrorKind::Config, "--rounds must be >= 1");
  if (c.grid < 1) throw Error(ErrorKind::Config, "--grid must be >= 1");
}

void run(const RunConfig& c) {
  Artifacts out(c);
  if (c.subcommand == "simulate") cmd_simulate(c, out);
  else if (c.subcommand == "optimize") cmd_optimize(c, out);
  else if (c.subcommand == "best-response") cmd_best_response(c, out);
  else if (c.subcommand == "oracle") cmd_oracle(c, out);
  else if (c.subcommand == "gadget-check") cmd_gadget_check(c, out);
  else if (c.subcommand == "fixtures") cmd_fixtures(c, out);
  else throw Error(ErrorKind::Config, fmt::format("unknown subcommand '{}'", c.subcommand));
  out.commit(resolve_workers(c.workers));
}

int main_entry(int argc, const char* const* argv) {
  try {
    const auto config = parse_command_line(argc, argv);
    if (!config) return kOk;
    validate_config(*config);
    run(*config);
    return kOk;
  } catch (const Error& e) {
    const int code = exit_code(e.kind());
    report(to_string(e.kind()), e.what(), code);
    return code;
  } catch (const std::filesystem::filesystem_error& e) {
    report("io", e.what(), kIoError);
    return kIoError;
  } catch (const std::exception& e) {
    report("internal", e.what(), kInternalError);
    return kInternalError;
  }
}

}  // namespace adspread::cli
