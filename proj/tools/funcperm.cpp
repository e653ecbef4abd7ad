#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "funcperm/funcperm.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace funcperm;

namespace {

struct SimulateArgs {
  std::size_t count = 10;
  GbmParams params;
  std::uint64_t seed = kDefaultSeed;
  std::string out;
};

struct TestArgs {
  std::string x, y, method;
  std::size_t k = 10;
  std::size_t components = 4;
  std::size_t B = 1000;
  std::uint64_t seed = kDefaultSeed;
  std::optional<std::uint64_t> tie_seed;
  double alpha = 0.05;
  unsigned threads = 1;
  bool no_header = false;
};

struct DepthArgs {
  std::string in;
  std::string method = "fm";
  std::size_t r = 2;
  std::uint64_t tie_seed = kDefaultSeed;
  bool no_header = false;
};

struct PowerArgs {
  std::string config;
  std::string out_dir = ".";
  std::optional<unsigned> threads;
};

void print(const json& record) { std::cout << record.dump(2) << '\n'; }

int run_simulate(const SimulateArgs& a) {
  const auto sample = simulate_gbm(a.params, a.count, a.seed);
  std::ofstream out(a.out);
  if (!out) throw Error("cannot write '" + a.out + "'");
  write_sample(out, sample);
  out.close();
  if (!out) throw Error("failed writing '" + a.out + "'");
  print({{"command", "simulate"},
         {"out", a.out},
         {"count", a.count},
         {"grid_points", a.params.grid_points},
         {"x0", a.params.x0},
         {"r", a.params.r},
         {"sigma", a.params.sigma},
         {"t_max", a.params.t_max},
         {"seed", a.seed}});
  return 0;
}

int run_test_command(const TestArgs& a) {
  if (!(a.alpha > 0.0 && a.alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)", "alpha");
  const CsvOptions csv{.header = !a.no_header};
  const auto xs = load_sample(a.x, csv);
  const auto ys = load_sample(a.y, csv);
  const auto pooled = PooledSample::pool(xs, ys);
  const TestSpec spec{a.method, parse_method(a.method), a.k, a.components, a.B};
  const std::uint64_t tie_seed = a.tie_seed.value_or(a.seed);
  auto result = run_test(spec, pooled, a.seed, tie_seed, a.threads);
  result.settings.alpha = a.alpha;

  json settings = json::object();
  if (result.settings.k) settings["k"] = *result.settings.k;
  if (result.settings.components) settings["components"] = *result.settings.components;
  if (result.settings.B) settings["B"] = *result.settings.B;
  if (result.settings.seed) settings["seed"] = *result.settings.seed;
  if (result.settings.tie_seed) settings["tie_seed"] = *result.settings.tie_seed;
  settings["alpha"] = a.alpha;
  json details = json::object();
  for (const auto& [key, value] : result.details) details[key] = value;
  print({{"command", "test"},
         {"method", result.method},
         {"statistic", result.statistic},
         {"p_value", result.p_value},
         {"reject", result.p_value <= a.alpha},
         {"m", result.m},
         {"n", result.n},
         {"settings", settings},
         {"details", details},
         {"warnings", result.warnings},
         {"duration_ms", result.duration_ms}});
  return 0;
}

int run_depth(const DepthArgs& a) {
  const auto sample = load_sample(a.in, {.header = !a.no_header});
  DepthVector d;
  if (a.method == "fm") d = fm_depths(sample, a.tie_seed);
  else if (a.method == "band") d = band_depth(sample, a.r, a.tie_seed);
  else if (a.method == "modified-band") d = modified_band_depth(sample, a.r, a.tie_seed);
  else throw ConfigError("unknown depth method '" + a.method + "'", "method");
  json record{{"command", "depth"}, {"method", to_string(d.method)}};
  if (d.method != DepthMethod::FraimanMuniz) record["r"] = d.order;
  record["exact"] = d.exact;
  record["seed"] = a.tie_seed;
  record["count"] = d.values.size();
  record["values"] = d.values;
  print(record);
  return 0;
}

int run_power(const PowerArgs& a) {
  auto config = load_power_config(a.config);
  if (a.threads) config.threads = *a.threads;
  fs::create_directories(a.out_dir);
  const std::string stem = fs::path(a.config).stem().string();
  const auto total = config.alternatives.size() * config.replications;
  const std::size_t step = std::max<std::size_t>(1, total / 20);
  std::cerr << "power study '" << stem << "': " << config.alternatives.size() << " samples x "
            << config.roster.size() << " tests x R=" << config.replications << ", seed " << config.seed << '\n';
  const auto table = power_study(config, [&](std::size_t done, std::size_t all) {
    if (done % step == 0 || done == all) std::cerr << "  " << done << "/" << all << " replications\n";
  });
  const fs::path csv_path = fs::path(a.out_dir) / (stem + ".csv");
  const fs::path txt_path = fs::path(a.out_dir) / (stem + ".txt");
  std::ofstream csv(csv_path), txt(txt_path);
  if (!csv || !txt) throw Error("cannot write to '" + a.out_dir + "'");
  write_power_csv(csv, table);
  write_power_text(txt, table);
  std::size_t failures = 0;
  for (auto f : table.failures) failures += f;
  print({{"command", "power"},
         {"config", a.config},
         {"csv", csv_path.string()},
         {"text", txt_path.string()},
         {"rows", table.rows.size()},
         {"columns", table.columns.size()},
         {"replications", table.replications},
         {"failures", failures},
         {"seed", config.seed}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Permutation two-sample tests for functional data"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Write geometric Brownian motion paths to CSV");
  simulate->add_option("--count", sim.count, "Number of paths")->capture_default_str()->check(CLI::PositiveNumber);
  simulate->add_option("--x0", sim.params.x0, "Initial value")->capture_default_str();
  simulate->add_option("--r", sim.params.r, "Drift")->capture_default_str();
  simulate->add_option("--sigma", sim.params.sigma, "Volatility")->capture_default_str();
  simulate->add_option("--grid-points", sim.params.grid_points, "Grid size on [0, t-max]")->capture_default_str();
  simulate->add_option("--t-max", sim.params.t_max, "Horizon")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
  simulate->add_option("--out", sim.out, "Output CSV")->required();

  TestArgs test;
  auto* test_cmd = app.add_subcommand("test", "Run a two-sample test on two CSV files");
  test_cmd->add_option("--x", test.x, "First sample CSV")->required()->check(CLI::ExistingFile);
  test_cmd->add_option("--y", test.y, "Second sample CSV")->required()->check(CLI::ExistingFile);
  test_cmd->add_option("--method", test.method, "wilcoxon | ma1 | ma2 | schilling | hk")->required();
  test_cmd->add_option("--k", test.k, "Neighbours for schilling")->capture_default_str();
  test_cmd->add_option("--components", test.components, "Components for hk")->capture_default_str();
  test_cmd->add_option("--B", test.B, "Permutations")->capture_default_str();
  test_cmd->add_option("--seed", test.seed, "Permutation seed")->capture_default_str();
  test_cmd->add_option("--tie-seed", test.tie_seed, "Tie-breaking seed (default: --seed)");
  test_cmd->add_option("--alpha", test.alpha, "Level used for the reject field")->capture_default_str();
  test_cmd->add_option("--threads", test.threads, "Worker threads, 0 = all cores")->capture_default_str();
  test_cmd->add_flag("--no-header", test.no_header, "CSV files have no grid header row");

  DepthArgs depth;
  auto* depth_cmd = app.add_subcommand("depth", "Depth of every curve in a CSV file");
  depth_cmd->add_option("--in", depth.in, "Sample CSV")->required()->check(CLI::ExistingFile);
  depth_cmd->add_option("--method", depth.method, "fm | band | modified-band")->capture_default_str();
  depth_cmd->add_option("--r", depth.r, "Band order")->capture_default_str();
  depth_cmd->add_option("--tie-seed", depth.tie_seed, "Tie-breaking (fm) or band sampling seed")
      ->capture_default_str();
  depth_cmd->add_flag("--no-header", depth.no_header, "CSV file has no grid header row");

  PowerArgs power;
  auto* power_cmd = app.add_subcommand("power", "Run a Monte-Carlo power study from an INI config");
  power_cmd->add_option("--config", power.config, "Study config")->required()->check(CLI::ExistingFile);
  power_cmd->add_option("--out-dir", power.out_dir, "Directory for the CSV and text tables")->capture_default_str();
  power_cmd->add_option("--threads", power.threads, "Worker threads, overrides the config");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) return run_simulate(sim);
    if (*test_cmd) return run_test_command(test);
    if (*depth_cmd) return run_depth(depth);
    if (*power_cmd) return run_power(power);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << " [key: " << e.key() << "]\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
