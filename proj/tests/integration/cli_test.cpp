#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "json.hpp"

namespace adspread::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Invocation {
  int code = 0;
  std::string err;
};

Invocation invoke(std::initializer_list<std::string> args) {
  std::vector<std::string> storage{"adspread"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : storage) argv.push_back(s.c_str());
  testing::internal::CaptureStderr();
  Invocation r;
  r.code = main_entry(static_cast<int>(argv.size()), argv.data());
  r.err = testing::internal::GetCapturedStderr();
  return r;
}

class CliTest : public testing::Test {
 protected:
  static void SetUpTestSuite() {
    root_ = fs::temp_directory_path() / "adspread_cli_test";
    fs::remove_all(root_);
    ASSERT_EQ(invoke({"fixtures", "--out", (root_ / "fx").string()}).code, kOk);
  }
  static void TearDownTestSuite() { fs::remove_all(root_); }

  static std::string fx(const std::string& rel) { return (root_ / "fx" / rel).string(); }
  static fs::path out(const std::string& name) { return root_ / name; }

  static std::vector<std::string> fig3(const std::string& subcommand) {
    return {subcommand, "--net", fx("fig3/network.txt"), "--sim", fx("fig3/similarity.txt"), "--products",
            fx("fig3/products.txt"), "--plans", fx("fig3/plans.json")};
  }

  static Invocation invoke_with(std::vector<std::string> args) {
    std::vector<std::string> storage{"adspread"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : storage) argv.push_back(s.c_str());
    testing::internal::CaptureStderr();
    Invocation r;
    r.code = main_entry(static_cast<int>(argv.size()), argv.data());
    r.err = testing::internal::GetCapturedStderr();
    return r;
  }

  static std::vector<std::string> cat(std::vector<std::string> a, std::initializer_list<std::string> b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  }

  static inline fs::path root_;
};

TEST_F(CliTest, FixturesWritesManifest) {
  EXPECT_TRUE(fs::exists(fx("manifest.json")));
  EXPECT_TRUE(fs::exists(fx("fig2/plans.json")));
  EXPECT_TRUE(fs::exists(fx("fig3/plans_tp.json")));
}

TEST_F(CliTest, SimulateFig3) {
  const auto dir = out("sim");
  const auto r = invoke_with(cat(fig3("simulate"), {"--reps", "20000", "--seed", "5", "--out",
                                                 dir.string(), "--trajectory", "--per-node"}));
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto j = Json::parse(slurp(dir / "result.json"));
  EXPECT_EQ(j["subcommand"], "simulate");
  EXPECT_EQ(j["seed"], 5);
  const double mean = j["spread"][0]["mean"];
  const double se = j["spread"][0]["std_error"];
  EXPECT_NEAR(mean, 6.72, 4 * se);
  EXPECT_TRUE(j.contains("per_node"));
  EXPECT_TRUE(fs::exists(dir / "pseudo.json"));
  EXPECT_TRUE(fs::exists(dir / "metadata.json"));
  const auto traj = slurp(dir / "trajectory.csv");
  EXPECT_EQ(traj.rfind("# adspread ", 0), 0u);
}

TEST_F(CliTest, RerunIsByteIdentical) {
  const auto a = out("rerun_a"), b = out("rerun_b");
  ASSERT_EQ(invoke_with(cat(fig3("simulate"), {"--reps", "3000", "--out", a.string()})).code, kOk);
  ASSERT_EQ(invoke_with(cat(fig3("simulate"), {"--reps", "3000", "--out", b.string(), "--workers", "3"}))
                .code,
            kOk);
  EXPECT_EQ(slurp(a / "result.json"), slurp(b / "result.json"));
  EXPECT_EQ(slurp(a / "pseudo.json"), slurp(b / "pseudo.json"));
}

TEST_F(CliTest, OracleAgrees) {
  const auto dir = out("oracle");
  const auto r = invoke_with(cat(fig3("oracle"), {"--grid", "50", "--reps", "20000", "--out", dir.string()}));
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto j = Json::parse(slurp(dir / "result.json"));
  EXPECT_TRUE(j["agree"].get<bool>());
}

TEST_F(CliTest, GadgetCheck) {
  const auto dir = out("gadget");
  const auto r = invoke_with({"gadget-check", "--reps", "500", "--out", dir.string()});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto j = Json::parse(slurp(dir / "result.json"));
  EXPECT_EQ(j["trials"], 500);
  EXPECT_EQ(j["counterexamples"], 0);
}

TEST_F(CliTest, OptimizeAndBestResponse) {
  const auto opt = out("opt");
  auto r = invoke_with({"optimize", "--net", fx("fig2/network.txt"), "--sim", fx("fig2/similarity.txt"),
                        "--products", fx("fig2/products.txt"), "--plans", fx("fig2/plans.json"), "--budget", "1",
                        "--reps", "200", "--out", opt.string()});
  ASSERT_EQ(r.code, kOk) << r.err;
  auto j = Json::parse(slurp(opt / "result.json"));
  EXPECT_LE(j["cost"].get<double>(), 1.0 + 1e-9);
  EXPECT_TRUE(fs::exists(opt / "plans.json"));
  EXPECT_EQ(slurp(opt / "trace.csv").rfind("# adspread ", 0), 0u);

  const auto br = out("br");
  r = invoke_with({"best-response", "--net", fx("fig2/network.txt"), "--sim", fx("fig2/similarity.txt"),
                   "--products", fx("fig2/products.txt"), "--budget", "1,1", "--rounds", "1", "--reps", "200",
                   "--out", br.string()});
  ASSERT_EQ(r.code, kOk) << r.err;
  j = Json::parse(slurp(br / "result.json"));
  EXPECT_EQ(j["rounds_run"], 1);
}

TEST_F(CliTest, MissingInputIsConfigErrorWithoutOutputs) {
  const auto dir = out("missing");
  const auto r = invoke_with({"simulate", "--net", fx("fig3/network.txt"), "--products", fx("fig3/products.txt"),
                              "--out", dir.string()});
  EXPECT_EQ(r.code, kConfigError);
  const auto j = Json::parse(r.err);
  EXPECT_EQ(j["error"]["exit_code"], kConfigError);
  EXPECT_FALSE(fs::exists(dir / "result.json"));
}

TEST_F(CliTest, NonexistentFileIsConfigError) {
  const auto r = invoke_with({"simulate", "--net", fx("nope.txt"), "--products", fx("fig3/products.txt"), "--plans",
                              fx("fig3/plans.json"), "--out", out("nofile").string()});
  EXPECT_EQ(r.code, kConfigError);
}

TEST_F(CliTest, MalformedNetworkIsConfigError) {
  const auto bad = out("bad_net.txt");
  fs::create_directories(root_);
  std::ofstream(bad) << "0 1 0.8\n2 1 0.8\n";
  const auto dir = out("badnet");
  const auto r = invoke_with({"simulate", "--net", bad.string(), "--products", fx("fig3/products.txt"), "--plans",
                              fx("fig3/plans.json"), "--out", dir.string()});
  EXPECT_EQ(r.code, kConfigError);
  EXPECT_NE(r.err.find("\"error\""), std::string::npos);
  EXPECT_FALSE(fs::exists(dir / "result.json"));
}

TEST_F(CliTest, OptimizeRequiresBudget) {
  const auto r = invoke_with(cat(fig3("optimize"), {"--out", out("nobudget").string()}));
  EXPECT_EQ(r.code, kConfigError);
}

TEST_F(CliTest, ConfigFileAndFlagPrecedence) {
  const auto cfg = out("run.toml");
  fs::create_directories(root_);
  std::ofstream(cfg) << "# fig3 run\nnet = fx/fig3/network.txt\nsim = fx/fig3/similarity.txt\n"
                        "products = fx/fig3/products.txt\nplans = fx/fig3/plans.json\nseed = 9\nreps = 1000\n";
  const auto dir = out("cfg");
  auto r = invoke_with({"simulate", "--config", cfg.string(), "--seed", "10", "--out", dir.string()});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto j = Json::parse(slurp(dir / "result.json"));
  EXPECT_EQ(j["seed"], 10);
  EXPECT_EQ(j["replications"], 1000);

  std::ofstream(cfg) << "unknown_key = 3\n";
  r = invoke_with({"simulate", "--config", cfg.string(), "--out", out("cfg_bad").string()});
  EXPECT_EQ(r.code, kConfigError);
}

TEST(ConfigText, ParsesSectionsAndLists) {
  RunConfig c;
  apply_config_text(c, "budget = [1, 2.5]\n[ce]\nsamples = 40\nsmoothing = 0.5\n[cost]\nseed = 2\n", "/base");
  EXPECT_EQ(c.budgets, (std::vector<double>{1, 2.5}));
  EXPECT_EQ(c.ce.samples, 40u);
  EXPECT_EQ(c.ce.smoothing, 0.5);
  EXPECT_EQ(c.cost.seed_unit_cost, 2.0);
  EXPECT_THROW(apply_config_text(c, "reps = many\n", "/base"), Error);
}

TEST(ConfigText, HashIgnoresOutputDirectory) {
  RunConfig a, b;
  a.subcommand = b.subcommand = "simulate";
  b.out_dir = "/elsewhere";
  b.workers = 4;
  EXPECT_EQ(canonical_config(a), canonical_config(b));
  b.seed = 2;
  EXPECT_NE(fnv1a64(canonical_config(a)), fnv1a64(canonical_config(b)));
}

}  // namespace
}  // namespace adspread::cli
