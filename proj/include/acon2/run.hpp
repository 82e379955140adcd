#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "acon2/amm.hpp"
#include "acon2/feeds.hpp"
#include "acon2/metrics.hpp"
#include "acon2/mvp.hpp"
#include "acon2/score_kalman.hpp"

namespace acon2 {

inline constexpr int kSchemaVersion = 1;

enum class RunMode { kSimulate, kReplay };

// Everything needed to reproduce one run. Defaults: eta = 5, m = 100,
// r = 1000, tau_max = 1, gamma_noise = 1e-3, w_bar0 = v_bar0 = floor = 4.6,
// beta_hat = floor(K/2), alpha_k = alpha/K.
struct RunConfig {
  RunMode mode = RunMode::kSimulate;
  double alpha = 0.01;
  std::optional<std::size_t> k;          // defaults to the number of sources
  std::optional<std::size_t> beta_hat;   // defaults to floor(K/2)
  NuPolicy nu_policy = NuPolicy::kZero;
  double nu = 0.0;                       // used when nu_policy is kExplicit
  KalmanSettings kalman;
  std::vector<KalmanSettings> source_kalman;  // optional per-source overrides
  MvpConfig mvp;                         // alpha_k and seed are derived per source
  std::uint64_t seed = 0;
  std::size_t warmup = 100;
  bool sigma_baseline = true;
  std::optional<std::size_t> twap_source = 0;
  std::int64_t twap_window_seconds = 1800;

  amm::SimConfig sim;                    // simulate mode; sim.seed is derived
  std::string csv_path;                  // replay mode

  std::filesystem::path out_dir = "out";
  bool records_json = false;

  std::size_t resolved_k() const;
  std::size_t resolved_beta_hat() const;
  double alpha_k() const { return alpha / static_cast<double>(resolved_k()); }
};

// Field-precise validation failure, e.g. "alpha: must lie in (0, 1)".
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parse a JSON config; missing fields take their defaults. Throws ConfigError.
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& cfg);
RunConfig load_config(const std::filesystem::path& path);

// Default simulated market: K pools at price 2000 with 1000 units of X each,
// a log-normal trader and an uncapped arbitrageur.
amm::SimConfig default_sim(std::size_t n_pools, std::uint64_t steps);

// Checks ranges and cross-field constraints. K is checked against the feed
// later, in replay mode. Throws ConfigError.
void validate(const RunConfig& cfg);

struct RunResult {
  std::vector<std::string> sources;
  std::vector<StepRecord> records;
  Summary summary;
  double nu = 0.0;  // inflation margin actually used
};

// Build predictors and run the pipeline in memory.
RunResult execute(const RunConfig& cfg);

// execute() and write steps.csv, summary.json, resolved_config.json (and
// steps.jsonl when records_json) into cfg.out_dir.
RunResult run(const RunConfig& cfg);

void write_records_csv(std::ostream& os, const std::vector<std::string>& sources,
                       const std::vector<StepRecord>& records);
void write_records_jsonl(std::ostream& os, const std::vector<std::string>& sources,
                         const std::vector<StepRecord>& records);
nlohmann::json summary_to_json(const RunConfig& cfg, const RunResult& result);

}  // namespace acon2
