#include "acon2/run.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <ostream>
#include <set>
#include <sstream>

#include "acon2/format.hpp"

namespace acon2 {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
  throw ConfigError(field + ": " + msg);
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
  if (!j.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) fail(path + item.key(), "unknown field");
  }
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& path) {
  if (!j.contains(key) || j.at(key).is_null()) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(path + key, "wrong type (" + std::string(j.at(key).type_name()) + ")");
  }
}

template <typename T>
void read_opt(const json& j, const char* key, std::optional<T>& out, const std::string& path) {
  if (!j.contains(key)) return;
  if (j.at(key).is_null()) {
    out.reset();
    return;
  }
  T value{};
  read(j, key, value, path);
  out = value;
}

const char* mode_name(RunMode m) { return m == RunMode::kSimulate ? "simulate" : "replay"; }

const char* nu_policy_name(NuPolicy p) {
  switch (p) {
    case NuPolicy::kZero:
      return "zero";
    case NuPolicy::kFirstTickSpread:
      return "first_tick_spread";
    case NuPolicy::kExplicit:
      return "explicit";
  }
  return "zero";
}

const char* direction_name(amm::Direction d) {
  return d == amm::Direction::kSellX ? "sell_x" : "buy_x";
}

KalmanSettings kalman_from_json(const json& j, const std::string& path, KalmanSettings k) {
  check_keys(j, path, {"w_bar0", "v_bar0", "w_bar_floor", "gamma_noise", "max_log_step", "sigma2_init"});
  read(j, "w_bar0", k.w_bar0, path);
  read(j, "v_bar0", k.v_bar0, path);
  read(j, "w_bar_floor", k.w_bar_floor, path);
  read(j, "gamma_noise", k.gamma_noise, path);
  read(j, "max_log_step", k.max_log_step, path);
  read(j, "sigma2_init", k.sigma2_init, path);
  return k;
}

json kalman_to_json(const KalmanSettings& k) {
  return {{"w_bar0", k.w_bar0},
          {"v_bar0", k.v_bar0},
          {"w_bar_floor", k.w_bar_floor},
          {"gamma_noise", k.gamma_noise},
          {"max_log_step", k.max_log_step},
          {"sigma2_init", k.sigma2_init}};
}

void sim_from_json(const json& j, amm::SimConfig& sim, std::optional<std::size_t> k) {
  const std::string path = "simulate.";
  check_keys(j, path,
             {"steps", "step_seconds", "pools", "market", "trader", "arbitrage", "schedule"});
  read(j, "steps", sim.steps, path);
  read(j, "step_seconds", sim.step_seconds, path);
  if (j.contains("pools") && j.contains("market")) {
    fail(path + "pools", "give either pools or market, not both");
  }
  if (j.contains("pools")) {
    const json& pools = j.at("pools");
    if (!pools.is_array()) fail(path + "pools", "expected an array");
    sim.pools.clear();
    for (std::size_t i = 0; i < pools.size(); ++i) {
      const std::string p = path + "pools[" + std::to_string(i) + "].";
      check_keys(pools[i], p, {"reserve_x", "reserve_y", "fee"});
      amm::Pool pool;
      read(pools[i], "reserve_x", pool.reserve_x, p);
      read(pools[i], "reserve_y", pool.reserve_y, p);
      read(pools[i], "fee", pool.fee, p);
      sim.pools.push_back(pool);
    }
  } else {
    double price = 2000.0;
    double depth = 1000.0;
    double fee = 0.0;
    std::size_t n = k.value_or(sim.pools.size());
    if (j.contains("market")) {
      const std::string p = path + "market.";
      const json& m = j.at("market");
      check_keys(m, p, {"n_pools", "price", "depth", "fee"});
      read(m, "n_pools", n, p);
      read(m, "price", price, p);
      read(m, "depth", depth, p);
      read(m, "fee", fee, p);
    }
    sim.pools = amm::equal_pools(n, price, depth, fee);
  }
  if (j.contains("trader")) {
    const std::string p = path + "trader.";
    check_keys(j.at("trader"), p, {"enabled", "log_size_mean", "log_size_sd"});
    read(j.at("trader"), "enabled", sim.trader.enabled, p);
    read(j.at("trader"), "log_size_mean", sim.trader.log_size_mean, p);
    read(j.at("trader"), "log_size_sd", sim.trader.log_size_sd, p);
  }
  if (j.contains("arbitrage")) {
    const std::string p = path + "arbitrage.";
    check_keys(j.at("arbitrage"), p, {"enabled", "tolerance", "max_fraction", "max_rounds"});
    read(j.at("arbitrage"), "enabled", sim.arbitrage.enabled, p);
    read(j.at("arbitrage"), "tolerance", sim.arbitrage.tolerance, p);
    read(j.at("arbitrage"), "max_fraction", sim.arbitrage.max_fraction, p);
    read(j.at("arbitrage"), "max_rounds", sim.arbitrage.max_rounds, p);
  }
  if (j.contains("schedule")) {
    const json& sched = j.at("schedule");
    if (!sched.is_array()) fail(path + "schedule", "expected an array");
    sim.schedule.clear();
    for (std::size_t i = 0; i < sched.size(); ++i) {
      const std::string p = path + "schedule[" + std::to_string(i) + "].";
      check_keys(sched[i], p, {"step", "pool", "size_fraction", "direction", "reverse"});
      amm::AdversaryAction a;
      read(sched[i], "step", a.step, p);
      read(sched[i], "pool", a.pool, p);
      read(sched[i], "size_fraction", a.size_fraction, p);
      read(sched[i], "reverse", a.reverse, p);
      std::string dir = direction_name(a.direction);
      read(sched[i], "direction", dir, p);
      if (dir == "sell_x") {
        a.direction = amm::Direction::kSellX;
      } else if (dir == "buy_x") {
        a.direction = amm::Direction::kBuyX;
      } else {
        fail(p + "direction", "expected sell_x or buy_x, got '" + dir + "'");
      }
      sim.schedule.push_back(a);
    }
  }
}

json sim_to_json(const amm::SimConfig& sim) {
  json pools = json::array();
  for (const amm::Pool& p : sim.pools) {
    pools.push_back({{"reserve_x", p.reserve_x}, {"reserve_y", p.reserve_y}, {"fee", p.fee}});
  }
  json sched = json::array();
  for (const amm::AdversaryAction& a : sim.schedule) {
    sched.push_back({{"step", a.step},
                     {"pool", a.pool},
                     {"size_fraction", a.size_fraction},
                     {"direction", direction_name(a.direction)},
                     {"reverse", a.reverse}});
  }
  return {{"steps", sim.steps},
          {"step_seconds", sim.step_seconds},
          {"pools", pools},
          {"trader",
           {{"enabled", sim.trader.enabled},
            {"log_size_mean", sim.trader.log_size_mean},
            {"log_size_sd", sim.trader.log_size_sd}}},
          {"arbitrage",
           {{"enabled", sim.arbitrage.enabled},
            {"tolerance", sim.arbitrage.tolerance},
            {"max_fraction", sim.arbitrage.max_fraction},
            {"max_rounds", sim.arbitrage.max_rounds}}},
          {"schedule", sched}};
}

std::string cell(const std::optional<double>& x) { return x ? format_double(*x) : std::string(); }

void interval_cells(std::ostream& os, const Interval& iv) {
  os << ',' << kind_name(iv.kind()) << ',';
  if (iv.is_bounded()) os << format_double(iv.lo()) << ',' << format_double(iv.hi());
  else os << ',';
}

json interval_json(const Interval& iv) {
  if (iv.is_empty()) return "empty";
  if (iv.is_full_line()) return "full";
  return json::array({iv.lo(), iv.hi()});
}

std::vector<BasePredictor> make_predictors(const RunConfig& cfg, std::size_t k,
                                           PredictorKind kind) {
  std::vector<BasePredictor> out;
  out.reserve(k);
  for (std::size_t j = 0; j < k; ++j) {
    MvpConfig mvp = cfg.mvp;
    mvp.alpha_k = cfg.alpha / static_cast<double>(k);
    mvp.seed = derive_seed(cfg.seed, j);
    const KalmanSettings& ks = j < cfg.source_kalman.size() ? cfg.source_kalman[j] : cfg.kalman;
    out.emplace_back(kind, ks, mvp);
  }
  return out;
}

}  // namespace

std::size_t RunConfig::resolved_k() const {
  if (k) return *k;
  return mode == RunMode::kSimulate ? sim.pools.size() : 0;
}

std::size_t RunConfig::resolved_beta_hat() const {
  return beta_hat ? *beta_hat : default_beta_hat(resolved_k());
}

amm::SimConfig default_sim(std::size_t n_pools, std::uint64_t steps) {
  amm::SimConfig sim;
  sim.pools = amm::equal_pools(n_pools, 2000.0, 1000.0);
  sim.steps = steps;
  return sim;
}

RunConfig config_from_json(const json& j) {
  RunConfig cfg;
  cfg.sim = default_sim(3, 1000);
  check_keys(j, "",
             {"schema_version", "mode", "alpha", "K", "beta_hat", "nu", "kalman", "sources", "mvp",
              "seed", "warmup", "baselines", "simulate", "replay", "output"});
  if (j.contains("schema_version")) {
    int version = 0;
    read(j, "schema_version", version, "");
    if (version != kSchemaVersion) {
      fail("schema_version", "unsupported version " + std::to_string(version));
    }
  }
  if (j.contains("mode")) {
    std::string mode;
    read(j, "mode", mode, "");
    if (mode == "simulate") cfg.mode = RunMode::kSimulate;
    else if (mode == "replay") cfg.mode = RunMode::kReplay;
    else fail("mode", "expected simulate or replay, got '" + mode + "'");
  }
  read(j, "alpha", cfg.alpha, "");
  read_opt(j, "K", cfg.k, "");
  read_opt(j, "beta_hat", cfg.beta_hat, "");
  read(j, "seed", cfg.seed, "");
  read(j, "warmup", cfg.warmup, "");
  if (j.contains("nu")) {
    const json& nu = j.at("nu");
    check_keys(nu, "nu.", {"policy", "value"});
    std::string policy = "zero";
    read(nu, "policy", policy, "nu.");
    if (policy == "zero") cfg.nu_policy = NuPolicy::kZero;
    else if (policy == "first_tick_spread") cfg.nu_policy = NuPolicy::kFirstTickSpread;
    else if (policy == "explicit") cfg.nu_policy = NuPolicy::kExplicit;
    else fail("nu.policy", "expected zero, first_tick_spread or explicit, got '" + policy + "'");
    read(nu, "value", cfg.nu, "nu.");
  }
  if (j.contains("kalman")) cfg.kalman = kalman_from_json(j.at("kalman"), "kalman.", cfg.kalman);
  if (j.contains("sources")) {
    const json& src = j.at("sources");
    if (!src.is_array()) fail("sources", "expected an array");
    for (std::size_t i = 0; i < src.size(); ++i) {
      cfg.source_kalman.push_back(
          kalman_from_json(src[i], "sources[" + std::to_string(i) + "].", cfg.kalman));
    }
  }
  if (j.contains("mvp")) {
    const json& m = j.at("mvp");
    check_keys(m, "mvp.", {"m", "eta", "r", "tau_max", "strict_eta"});
    read(m, "m", cfg.mvp.m, "mvp.");
    read(m, "eta", cfg.mvp.eta, "mvp.");
    read(m, "r", cfg.mvp.r, "mvp.");
    read(m, "tau_max", cfg.mvp.tau_max, "mvp.");
    read(m, "strict_eta", cfg.mvp.strict_eta, "mvp.");
  }
  if (j.contains("baselines")) {
    const json& b = j.at("baselines");
    check_keys(b, "baselines.", {"sigma_bps", "twap_source", "twap_window_seconds"});
    read(b, "sigma_bps", cfg.sigma_baseline, "baselines.");
    read_opt(b, "twap_source", cfg.twap_source, "baselines.");
    read(b, "twap_window_seconds", cfg.twap_window_seconds, "baselines.");
  }
  if (j.contains("simulate")) sim_from_json(j.at("simulate"), cfg.sim, cfg.k);
  else if (cfg.k) cfg.sim.pools = amm::equal_pools(*cfg.k, 2000.0, 1000.0);
  if (j.contains("replay")) {
    check_keys(j.at("replay"), "replay.", {"csv"});
    read(j.at("replay"), "csv", cfg.csv_path, "replay.");
  }
  if (j.contains("output")) {
    const json& o = j.at("output");
    check_keys(o, "output.", {"dir", "records_json"});
    std::string dir = cfg.out_dir.string();
    read(o, "dir", dir, "output.");
    cfg.out_dir = dir;
    read(o, "records_json", cfg.records_json, "output.");
  }
  return cfg;
}

json config_to_json(const RunConfig& cfg) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["mode"] = mode_name(cfg.mode);
  j["alpha"] = cfg.alpha;
  j["K"] = cfg.k ? json(*cfg.k) : json(nullptr);
  j["beta_hat"] = cfg.beta_hat ? json(*cfg.beta_hat) : json(nullptr);
  j["nu"] = {{"policy", nu_policy_name(cfg.nu_policy)}, {"value", cfg.nu}};
  j["kalman"] = kalman_to_json(cfg.kalman);
  json sources = json::array();
  for (const KalmanSettings& k : cfg.source_kalman) sources.push_back(kalman_to_json(k));
  j["sources"] = sources;
  j["mvp"] = {{"m", cfg.mvp.m},
              {"eta", cfg.mvp.eta},
              {"r", cfg.mvp.r},
              {"tau_max", cfg.mvp.tau_max},
              {"strict_eta", cfg.mvp.strict_eta}};
  j["seed"] = cfg.seed;
  j["warmup"] = cfg.warmup;
  j["baselines"] = {{"sigma_bps", cfg.sigma_baseline},
                    {"twap_source", cfg.twap_source ? json(*cfg.twap_source) : json(nullptr)},
                    {"twap_window_seconds", cfg.twap_window_seconds}};
  j["simulate"] = sim_to_json(cfg.sim);
  j["replay"] = {{"csv", cfg.csv_path}};
  j["output"] = {{"dir", cfg.out_dir.string()}, {"records_json", cfg.records_json}};
  return j;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

void validate(const RunConfig& cfg) {
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) fail("alpha", "must lie in (0, 1)");
  const std::size_t k = cfg.resolved_k();
  if (cfg.k && *cfg.k < 1) fail("K", "must be at least 1");
  if (cfg.mode == RunMode::kSimulate) {
    if (cfg.sim.pools.size() != k) {
      fail("K", "simulate mode has " + std::to_string(cfg.sim.pools.size()) + " pools but K=" +
                    std::to_string(k));
    }
    try {
      amm::validate(cfg.sim);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  } else if (cfg.csv_path.empty()) {
    fail("replay.csv", "replay mode needs a CSV path");
  }
  if (k >= 1 && cfg.resolved_beta_hat() >= k) {
    fail("beta_hat", "must be less than K (beta_hat=" + std::to_string(cfg.resolved_beta_hat()) +
                         ", K=" + std::to_string(k) + ")");
  }
  if (cfg.nu_policy == NuPolicy::kExplicit && !(cfg.nu >= 0.0 && std::isfinite(cfg.nu))) {
    fail("nu.value", "must be a finite value >= 0");
  }
  auto check_kalman = [](const KalmanSettings& ks, const std::string& path) {
    if (!(ks.gamma_noise >= 0.0)) fail(path + "gamma_noise", "must be >= 0");
    if (!(ks.max_log_step > 0.0)) fail(path + "max_log_step", "must be > 0");
    if (!std::isfinite(ks.w_bar0)) fail(path + "w_bar0", "must be finite");
    if (!std::isfinite(ks.v_bar0)) fail(path + "v_bar0", "must be finite");
    if (!std::isfinite(ks.w_bar_floor)) fail(path + "w_bar_floor", "must be finite");
    if (!(ks.sigma2_init >= 0.0)) fail(path + "sigma2_init", "must be >= 0");
  };
  check_kalman(cfg.kalman, "kalman.");
  for (std::size_t i = 0; i < cfg.source_kalman.size(); ++i) {
    check_kalman(cfg.source_kalman[i], "sources[" + std::to_string(i) + "].");
  }
  if (k >= 1 && cfg.source_kalman.size() > k) fail("sources", "more entries than sources");
  if (k >= 1) {
    MvpConfig probe = cfg.mvp;
    probe.alpha_k = cfg.alpha_k();
    try {
      validate(probe);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    if (cfg.twap_source && *cfg.twap_source >= k) {
      fail("baselines.twap_source", "index out of range for K=" + std::to_string(k));
    }
  }
  if (cfg.twap_window_seconds < 1) fail("baselines.twap_window_seconds", "must be at least 1");
}

RunResult execute(const RunConfig& in) {
  RunConfig cfg = in;
  validate(cfg);
  RunResult result;

  std::optional<Feed> feed;
  if (cfg.mode == RunMode::kReplay) {
    feed = read_csv(cfg.csv_path);
    if (cfg.k && *cfg.k != feed->sources.size()) {
      fail("K", "CSV has " + std::to_string(feed->sources.size()) + " sources but K=" +
                    std::to_string(*cfg.k));
    }
    cfg.k = feed->sources.size();
    validate(cfg);
    result.sources = feed->sources;
  } else {
    for (std::size_t j = 0; j < cfg.sim.pools.size(); ++j) {
      result.sources.push_back("pool" + std::to_string(j));
    }
  }
  const std::size_t k = cfg.resolved_k();

  ReplayOptions opts;
  opts.consensus = {k, cfg.resolved_beta_hat(), cfg.nu_policy == NuPolicy::kExplicit ? cfg.nu : 0.0};
  opts.nu_policy = cfg.nu_policy;
  opts.twap_source = cfg.twap_source;
  opts.twap_window_seconds = cfg.twap_window_seconds;
  Replayer replayer(make_predictors(cfg, k, PredictorKind::kMvpKalman), opts,
                    cfg.sigma_baseline ? make_predictors(cfg, k, PredictorKind::kSigmaBps)
                                       : std::vector<BasePredictor>{});

  if (feed) {
    result.records.reserve(feed->ticks.size());
    for (const Tick& t : feed->ticks) result.records.push_back(replayer.step(t));
  } else {
    amm::SimConfig sim = cfg.sim;
    sim.seed = derive_seed(cfg.seed, 0x5eed);
    amm::World world(std::move(sim));
    result.records.reserve(cfg.sim.steps);
    for (std::uint64_t t = 1; t <= cfg.sim.steps; ++t) {
      const std::vector<double> prices = world.step(t);
      Tick tick;
      tick.timestamp = static_cast<std::int64_t>(t) * cfg.sim.step_seconds;
      tick.prices.assign(prices.begin(), prices.end());
      result.records.push_back(replayer.step(tick));
    }
  }
  if (result.records.empty()) throw ConfigError("replay.csv: feed has no data rows");
  result.nu = replayer.consensus_config().nu;
  result.summary = summarize(result.records, cfg.warmup);
  return result;
}

void write_records_csv(std::ostream& os, const std::vector<std::string>& sources,
                       const std::vector<StepRecord>& records) {
  os << "step,timestamp";
  for (const std::string& s : sources) {
    os << ",label_" << s << ",base_kind_" << s << ",base_lo_" << s << ",base_hi_" << s
       << ",inflated_kind_" << s << ",inflated_lo_" << s << ",inflated_hi_" << s;
  }
  os << ",consensus_kind,consensus_lo,consensus_hi,pseudo_label,miscover,idk,size,"
        "running_miscoverage,twap,sigma_kind,sigma_lo,sigma_hi,sigma_miscover\n";
  for (const StepRecord& r : records) {
    os << r.index << ',' << r.timestamp;
    for (std::size_t j = 0; j < sources.size(); ++j) {
      os << ',' << cell(r.labels[j]);
      interval_cells(os, r.base[j]);
      interval_cells(os, r.inflated[j]);
    }
    interval_cells(os, r.consensus);
    os << ',' << format_double(r.pseudo_label) << ',' << (r.miscover ? 1 : 0) << ','
       << (r.idk ? 1 : 0) << ',' << cell(r.size) << ',' << format_double(r.running_miscoverage)
       << ',' << cell(r.twap);
    if (r.sigma_consensus) {
      interval_cells(os, *r.sigma_consensus);
      os << ',' << (r.sigma_miscover ? 1 : 0);
    } else {
      os << ",,,,";
    }
    os << '\n';
  }
}

void write_records_jsonl(std::ostream& os, const std::vector<std::string>& sources,
                         const std::vector<StepRecord>& records) {
  for (const StepRecord& r : records) {
    json j;
    j["step"] = r.index;
    j["timestamp"] = r.timestamp;
    json labels = json::object();
    json base = json::object();
    json inflated = json::object();
    for (std::size_t s = 0; s < sources.size(); ++s) {
      labels[sources[s]] = r.labels[s] ? json(*r.labels[s]) : json(nullptr);
      base[sources[s]] = interval_json(r.base[s]);
      inflated[sources[s]] = interval_json(r.inflated[s]);
    }
    j["labels"] = labels;
    j["base"] = base;
    j["inflated"] = inflated;
    j["consensus"] = interval_json(r.consensus);
    j["pseudo_label"] = r.pseudo_label;
    j["miscover"] = r.miscover;
    j["idk"] = r.idk;
    j["size"] = r.size ? json(*r.size) : json(nullptr);
    j["running_miscoverage"] = r.running_miscoverage;
    j["twap"] = r.twap ? json(*r.twap) : json(nullptr);
    if (r.sigma_consensus) {
      j["sigma_consensus"] = interval_json(*r.sigma_consensus);
      j["sigma_miscover"] = r.sigma_miscover;
    }
    os << j.dump() << '\n';
  }
}

json summary_to_json(const RunConfig& cfg, const RunResult& result) {
  const Summary& s = result.summary;
  json j;
  j["schema_version"] = kSchemaVersion;
  j["mode"] = mode_name(cfg.mode);
  j["sources"] = result.sources;
  j["K"] = result.sources.size();
  j["beta_hat"] = cfg.resolved_beta_hat();
  j["alpha"] = cfg.alpha;
  j["alpha_k"] = cfg.alpha / static_cast<double>(result.sources.size());
  j["nu"] = result.nu;
  j["steps"] = s.steps;
  j["warmup"] = s.warmup;
  j["miscoverage"] = s.miscoverage;
  j["miscoverage_after_warmup"] = s.miscoverage_after_warmup;
  j["idk_count"] = s.idk_count;
  j["idk_fraction"] = s.idk_fraction;
  j["full_line_count"] = s.full_line_count;
  json q = json::object();
  for (std::size_t i = 0; i < s.size_quantiles.size(); ++i) {
    q[format_double(kSizeQuantileLevels[i])] = s.size_quantiles[i];
  }
  j["size_quantiles"] = q;
  j["mean_size"] = s.mean_size;
  json base = json::object();
  for (std::size_t i = 0; i < result.sources.size() && i < s.base_miscoverage.size(); ++i) {
    base[result.sources[i]] = s.base_miscoverage[i];
  }
  j["base_miscoverage"] = base;

  // Prefix miscoverage, thinned to at most ~1000 points.
  const std::size_t stride = std::max<std::size_t>(1, result.records.size() / 1000);
  json prefix = json::array();
  for (std::size_t i = stride - 1; i < result.records.size(); i += stride) {
    prefix.push_back({result.records[i].index, result.records[i].running_miscoverage});
  }
  if (result.records.size() % stride != 0) {
    prefix.push_back({result.records.back().index, result.records.back().running_miscoverage});
  }
  j["prefix_miscoverage"] = {{"stride", stride}, {"points", prefix}};

  json baselines = json::object();
  baselines["median"] = {{"miscoverage", 0.0}};
  if (s.sigma_miscoverage) {
    baselines["sigma_bps"] = {
        {"miscoverage", *s.sigma_miscoverage},
        {"mean_size", s.sigma_mean_size ? json(*s.sigma_mean_size) : json(nullptr)}};
  }
  if (s.twap_mean_abs_error) {
    baselines["twap"] = {{"source", cfg.twap_source ? json(*cfg.twap_source) : json(nullptr)},
                         {"window_seconds", cfg.twap_window_seconds},
                         {"mean_abs_error", *s.twap_mean_abs_error}};
  }
  j["baselines"] = baselines;
  return j;
}

RunResult run(const RunConfig& cfg) {
  RunResult result = execute(cfg);
  std::filesystem::create_directories(cfg.out_dir);

  RunConfig resolved = cfg;
  resolved.k = result.sources.size();
  resolved.beta_hat = resolved.resolved_beta_hat();

  {
    std::ofstream os(cfg.out_dir / "steps.csv", std::ios::binary);
    write_records_csv(os, result.sources, result.records);
    if (!os) throw std::runtime_error("failed writing " + (cfg.out_dir / "steps.csv").string());
  }
  if (cfg.records_json) {
    std::ofstream os(cfg.out_dir / "steps.jsonl", std::ios::binary);
    write_records_jsonl(os, result.sources, result.records);
  }
  {
    std::ofstream os(cfg.out_dir / "summary.json", std::ios::binary);
    os << summary_to_json(resolved, result).dump(2) << '\n';
  }
  {
    std::ofstream os(cfg.out_dir / "resolved_config.json", std::ios::binary);
    os << config_to_json(resolved).dump(2) << '\n';
  }
  return result;
}

}  // namespace acon2
