#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "acon2/rng.hpp"

namespace acon2::amm {

// Constant-product pool trading token X against token Y. The spot price of X
// in units of Y is reserve_y / reserve_x.
struct Pool {
  double reserve_x = 1.0;
  double reserve_y = 1.0;
  double fee = 0.0;  // fraction of the input kept by the pool, in [0, 1)
};

// Throws std::invalid_argument for non-positive reserves or a fee outside [0, 1).
void validate(const Pool& pool);

double spot_price(const Pool& pool);

struct SwapResult {
  double amount_out = 0.0;
  Pool pool;
};

// dy = y - x y / (x + dx (1 - fee)); the pool keeps the full dx. Throws
// std::invalid_argument unless dx > 0.
SwapResult swap_x_for_y(const Pool& pool, double dx);
SwapResult swap_y_for_x(const Pool& pool, double dy);

// Amount lendable against `deposit` units valued at `price` under a collateral
// ratio given in percent.
double borrowable(double deposit, double price, double collateral_ratio_pct);

enum class Direction {
  kSellX,  // push X into the pool: spot price falls
  kBuyX,   // push Y into the pool: spot price rises
};

struct AdversaryAction {
  std::uint64_t step = 1;
  std::size_t pool = 0;
  // Input size as a fraction of the pool's reserve of the input token.
  double size_fraction = 0.5;
  Direction direction = Direction::kSellX;
  // Swap the proceeds back at the start of the next step.
  bool reverse = false;
};

struct TraderConfig {
  bool enabled = true;
  // Trade size as a log-normal fraction of the input-token reserve.
  double log_size_mean = -6.9;  // median fraction ~0.001
  double log_size_sd = 0.5;
};

struct ArbitrageConfig {
  bool enabled = true;
  // Pools whose spot is within this relative distance of the mid are left alone.
  double tolerance = 1e-3;
  // Per-step cap on the arbitrageur's X volume in one pool, as a fraction of
  // that pool's X reserve. <= 0 means uncapped.
  double max_fraction = 0.0;
  std::size_t max_rounds = 64;
};

struct SimConfig {
  std::vector<Pool> pools;
  std::uint64_t seed = 0;
  std::uint64_t steps = 1000;
  std::int64_t step_seconds = 60;
  TraderConfig trader;
  ArbitrageConfig arbitrage;
  std::vector<AdversaryAction> schedule;
};

// n identical pools at `price` holding `depth` units of X each.
std::vector<Pool> equal_pools(std::size_t n, double price, double depth, double fee = 0.0);

// Throws std::invalid_argument naming the offending field.
void validate(const SimConfig& cfg);

// Pools, agents and randomness of one simulation run.
class World {
 public:
  explicit World(SimConfig cfg);

  // Advance to step t (1-based, called with t = 1, 2, ...): pending reversals,
  // one trader swap, arbitrage, then scheduled adversary swaps. Returns the
  // post-step spot price of every pool.
  std::vector<double> step(std::uint64_t t);

  std::vector<double> spot_prices() const;
  const std::vector<Pool>& pools() const { return pools_; }
  const SimConfig& config() const { return cfg_; }

 private:
  struct PendingReversal {
    std::uint64_t step;
    std::size_t pool;
    Direction direction;  // direction of the reversing swap
    double amount;
  };

  void trade(std::size_t pool, Direction direction, double amount);
  void trader_step();
  void arbitrage_step();
  void adversary_step(std::uint64_t t);

  SimConfig cfg_;
  std::vector<Pool> pools_;
  SplitMix64 rng_;
  std::vector<PendingReversal> pending_;
};

// Relative spread (max - min) / min of a set of prices.
double relative_spread(const std::vector<double>& prices);

}  // namespace acon2::amm
