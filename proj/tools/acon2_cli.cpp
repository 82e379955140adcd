// acon2: run consensus-oracle experiments on a simulated AMM market or on a
// replayed multi-source price CSV.
//
//   acon2 simulate [--config FILE] [overrides...]
//   acon2 replay   --csv FILE [--config FILE] [overrides...]
//   acon2 bench    [--config FILE] --seeds N [overrides...]
//
// Exit status: 0 success, 2 invalid configuration, 3 unreadable input data,
// 1 anything else.
#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "acon2/run.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<double> alpha;
  std::optional<std::size_t> k;
  std::optional<std::size_t> beta_hat;
  std::optional<std::string> nu_policy;
  std::optional<double> nu;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> steps;
  std::optional<std::string> csv;
  std::optional<std::string> out;
  std::optional<std::size_t> warmup;
  std::optional<std::size_t> m;
  std::optional<double> eta;
  bool records_json = false;
  bool no_sigma = false;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-c,--config", o.config, "JSON run configuration");
  cmd->add_option("--alpha", o.alpha, "target consensus miscoverage");
  cmd->add_option("-K,--sources", o.k, "number of sources");
  cmd->add_option("--beta-hat", o.beta_hat, "assumed manipulable sources (default floor(K/2))");
  cmd->add_option("--nu-policy", o.nu_policy, "zero | first_tick_spread | explicit")
      ->check(CLI::IsMember({"zero", "first_tick_spread", "explicit"}));
  cmd->add_option("--nu", o.nu, "explicit inflation margin (implies --nu-policy explicit)");
  cmd->add_option("--seed", o.seed, "run seed");
  cmd->add_option("--warmup", o.warmup, "steps excluded from the warm-up-adjusted rate");
  cmd->add_option("--m", o.m, "MVP bins");
  cmd->add_option("--eta", o.eta, "MVP learning rate");
  cmd->add_option("-o,--out", o.out, "output directory");
  cmd->add_flag("--records-json", o.records_json, "also write steps.jsonl");
  cmd->add_flag("--no-sigma", o.no_sigma, "skip the sigma-BPS baseline");
}

acon2::RunConfig resolve(const Overrides& o, acon2::RunMode mode) {
  acon2::RunConfig cfg;
  if (!o.config.empty()) {
    cfg = acon2::load_config(o.config);
  } else {
    cfg.sim = acon2::default_sim(3, 1000);
  }
  cfg.mode = mode;
  if (o.alpha) cfg.alpha = *o.alpha;
  if (o.k) {
    cfg.k = *o.k;
    if (mode != acon2::RunMode::kReplay && cfg.sim.pools.size() != *o.k) {
      const acon2::amm::Pool p = cfg.sim.pools.empty() ? acon2::amm::Pool{1000.0, 2e6, 0.0}
                                                       : cfg.sim.pools.front();
      cfg.sim.pools.assign(*o.k, p);
    }
  }
  if (o.beta_hat) cfg.beta_hat = *o.beta_hat;
  if (o.nu_policy) {
    if (*o.nu_policy == "zero") cfg.nu_policy = acon2::NuPolicy::kZero;
    else if (*o.nu_policy == "first_tick_spread") cfg.nu_policy = acon2::NuPolicy::kFirstTickSpread;
    else cfg.nu_policy = acon2::NuPolicy::kExplicit;
  }
  if (o.nu) {
    cfg.nu = *o.nu;
    cfg.nu_policy = acon2::NuPolicy::kExplicit;
  }
  if (o.seed) cfg.seed = *o.seed;
  if (o.steps) cfg.sim.steps = *o.steps;
  if (o.csv) cfg.csv_path = *o.csv;
  if (o.out) cfg.out_dir = *o.out;
  if (o.warmup) cfg.warmup = *o.warmup;
  if (o.m) cfg.mvp.m = *o.m;
  if (o.eta) cfg.mvp.eta = *o.eta;
  if (o.records_json) cfg.records_json = true;
  if (o.no_sigma) cfg.sigma_baseline = false;
  return cfg;
}

void print_summary(const acon2::RunResult& r, const acon2::RunConfig& cfg) {
  const auto& s = r.summary;
  std::printf("steps %zu  miscoverage %.6f (after warm-up %zu: %.6f)  idk %.6f  mean size %.6g\n",
              s.steps, s.miscoverage, s.warmup, s.miscoverage_after_warmup, s.idk_fraction,
              s.mean_size);
  if (s.sigma_miscoverage) std::printf("sigma-BPS consensus miscoverage %.6f\n", *s.sigma_miscoverage);
  std::printf("outputs in %s\n", cfg.out_dir.string().c_str());
}

int bench(const acon2::RunConfig& base, std::size_t seeds, std::size_t threads) {
  std::vector<acon2::Summary> results(seeds);
  std::vector<double> seconds(seeds);
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::optional<std::string> error;
  auto worker = [&] {
    for (std::size_t i = next++; i < seeds; i = next++) {
      acon2::RunConfig cfg = base;
      cfg.seed = base.seed + i;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        results[i] = acon2::execute(cfg).summary;
      } catch (const std::exception& e) {
        std::lock_guard lock(err_mu);
        error = e.what();
      }
      seconds[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < std::max<std::size_t>(1, threads); ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) throw std::runtime_error(*error);

  nlohmann::json out;
  out["schema_version"] = acon2::kSchemaVersion;
  out["config"] = acon2::config_to_json(base);
  nlohmann::json runs = nlohmann::json::array();
  double sum = 0.0;
  for (std::size_t i = 0; i < seeds; ++i) {
    const auto& s = results[i];
    std::printf("seed %-6llu miscoverage %.6f  idk %.6f  mean size %.6g  %.2fs\n",
                static_cast<unsigned long long>(base.seed + i), s.miscoverage, s.idk_fraction,
                s.mean_size, seconds[i]);
    sum += s.miscoverage;
    runs.push_back({{"seed", base.seed + i},
                    {"miscoverage", s.miscoverage},
                    {"miscoverage_after_warmup", s.miscoverage_after_warmup},
                    {"idk_fraction", s.idk_fraction},
                    {"mean_size", s.mean_size},
                    {"seconds", seconds[i]}});
  }
  out["runs"] = runs;
  out["mean_miscoverage"] = sum / static_cast<double>(seeds);
  std::printf("mean miscoverage over %zu seeds: %.6f\n", seeds, sum / static_cast<double>(seeds));
  std::filesystem::create_directories(base.out_dir);
  std::ofstream(base.out_dir / "bench.json") << out.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Byzantine-robust adaptive conformal consensus oracle"};
  app.require_subcommand(1);

  Overrides sim_o, rep_o, bench_o;
  auto* sim = app.add_subcommand("simulate", "run on a simulated multi-pool AMM market");
  add_common(sim, sim_o);
  sim->add_option("--steps", sim_o.steps, "simulation steps");

  auto* rep = app.add_subcommand("replay", "replay a timestamped multi-source price CSV");
  add_common(rep, rep_o);
  rep->add_option("--csv", rep_o.csv, "input CSV: timestamp column, then one column per source");

  std::size_t seeds = 8;
  std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
  auto* bch = app.add_subcommand("bench", "simulate many seeds in parallel");
  add_common(bch, bench_o);
  bch->add_option("--steps", bench_o.steps, "simulation steps");
  bch->add_option("--seeds", seeds, "number of consecutive seeds")->check(CLI::PositiveNumber);
  bch->add_option("--threads", threads, "worker threads");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) {
      const auto cfg = resolve(sim_o, acon2::RunMode::kSimulate);
      print_summary(acon2::run(cfg), cfg);
    } else if (*rep) {
      const auto cfg = resolve(rep_o, acon2::RunMode::kReplay);
      print_summary(acon2::run(cfg), cfg);
    } else if (*bch) {
      return bench(resolve(bench_o, acon2::RunMode::kSimulate), seeds, threads);
    }
  } catch (const acon2::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const acon2::ParseError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
