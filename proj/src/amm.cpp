#include "acon2/amm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace acon2::amm {

void validate(const Pool& pool) {
  if (!(pool.reserve_x > 0.0) || !(pool.reserve_y > 0.0)) {
    throw std::invalid_argument("pool reserves must be positive");
  }
  if (!(pool.fee >= 0.0 && pool.fee < 1.0)) {
    throw std::invalid_argument("pool fee must lie in [0, 1)");
  }
}

double spot_price(const Pool& pool) { return pool.reserve_y / pool.reserve_x; }

SwapResult swap_x_for_y(const Pool& pool, double dx) {
  if (!(dx > 0.0) || std::isinf(dx)) throw std::invalid_argument("swap input must be positive");
  const double x = pool.reserve_x;
  const double y = pool.reserve_y;
  const double dy = y - x * y / (x + dx * (1.0 - pool.fee));
  Pool next = pool;
  next.reserve_x = x + dx;
  next.reserve_y = y - dy;
  return {dy, next};
}

SwapResult swap_y_for_x(const Pool& pool, double dy) {
  if (!(dy > 0.0) || std::isinf(dy)) throw std::invalid_argument("swap input must be positive");
  const double x = pool.reserve_x;
  const double y = pool.reserve_y;
  const double dx = x - x * y / (y + dy * (1.0 - pool.fee));
  Pool next = pool;
  next.reserve_y = y + dy;
  next.reserve_x = x - dx;
  return {dx, next};
}

double borrowable(double deposit, double price, double collateral_ratio_pct) {
  if (!(collateral_ratio_pct > 0.0)) {
    throw std::invalid_argument("collateral ratio must be positive");
  }
  return deposit * price * 100.0 / collateral_ratio_pct;
}

std::vector<Pool> equal_pools(std::size_t n, double price, double depth, double fee) {
  return std::vector<Pool>(n, Pool{depth, depth * price, fee});
}

void validate(const SimConfig& cfg) {
  if (cfg.pools.empty()) throw std::invalid_argument("sim.pools must not be empty");
  for (const Pool& p : cfg.pools) validate(p);
  if (cfg.steps < 1) throw std::invalid_argument("sim.steps must be at least 1");
  if (cfg.step_seconds < 1) throw std::invalid_argument("sim.step_seconds must be at least 1");
  if (!(cfg.trader.log_size_sd >= 0.0)) {
    throw std::invalid_argument("sim.trader.log_size_sd must be >= 0");
  }
  if (!(cfg.arbitrage.tolerance >= 0.0)) {
    throw std::invalid_argument("sim.arbitrage.tolerance must be >= 0");
  }
  for (std::size_t i = 0; i < cfg.schedule.size(); ++i) {
    const AdversaryAction& a = cfg.schedule[i];
    const std::string where = "sim.schedule[" + std::to_string(i) + "]";
    if (a.step < 1 || a.step > cfg.steps) {
      throw std::invalid_argument(where + ".step must lie in [1, steps]");
    }
    if (a.pool >= cfg.pools.size()) throw std::invalid_argument(where + ".pool out of range");
    if (!(a.size_fraction > 0.0)) {
      throw std::invalid_argument(where + ".size_fraction must be positive");
    }
  }
}

double relative_spread(const std::vector<double>& prices) {
  const auto [lo, hi] = std::minmax_element(prices.begin(), prices.end());
  return (*hi - *lo) / *lo;
}

World::World(SimConfig cfg) : cfg_(std::move(cfg)), rng_(cfg_.seed) {
  validate(cfg_);
  pools_ = cfg_.pools;
}

std::vector<double> World::spot_prices() const {
  std::vector<double> out;
  out.reserve(pools_.size());
  for (const Pool& p : pools_) out.push_back(spot_price(p));
  return out;
}

void World::trade(std::size_t pool, Direction direction, double amount) {
  Pool& p = pools_[pool];
  p = direction == Direction::kSellX ? swap_x_for_y(p, amount).pool
                                     : swap_y_for_x(p, amount).pool;
}

void World::trader_step() {
  if (!cfg_.trader.enabled) return;
  const std::size_t n = pools_.size();
  const auto pool = std::min(static_cast<std::size_t>(rng_.uniform() * static_cast<double>(n)),
                             n - 1);
  const Direction direction = rng_.uniform() < 0.5 ? Direction::kSellX : Direction::kBuyX;
  std::normal_distribution<double> gauss(cfg_.trader.log_size_mean, cfg_.trader.log_size_sd);
  const double fraction = std::exp(gauss(rng_));
  const Pool& p = pools_[pool];
  const double reserve = direction == Direction::kSellX ? p.reserve_x : p.reserve_y;
  trade(pool, direction, fraction * reserve);
}

void World::arbitrage_step() {
  const ArbitrageConfig& arb = cfg_.arbitrage;
  if (!arb.enabled || pools_.size() < 2) return;
  const std::size_t n = pools_.size();
  std::vector<double> budget(n);
  for (std::size_t i = 0; i < n; ++i) {
    budget[i] = arb.max_fraction > 0.0 ? arb.max_fraction * pools_[i].reserve_x
                                       : std::numeric_limits<double>::infinity();
  }
  for (std::size_t round = 0; round < arb.max_rounds; ++round) {
    double log_sum = 0.0;
    for (const Pool& p : pools_) log_sum += std::log(spot_price(p));
    const double mid = std::exp(log_sum / static_cast<double>(n));
    bool traded = false;
    for (std::size_t i = 0; i < n; ++i) {
      Pool& p = pools_[i];
      const double spot = spot_price(p);
      if (std::abs(spot / mid - 1.0) <= arb.tolerance || !(budget[i] > 0.0)) continue;
      // Zero-fee closed form: reserves (sqrt(k/mid), sqrt(k mid)) price at mid.
      const double k = p.reserve_x * p.reserve_y;
      const double target_x = std::sqrt(k / mid);
      const double volume = std::min(std::abs(target_x - p.reserve_x), budget[i]);
      if (!(volume > 0.0)) continue;
      budget[i] -= volume;
      if (spot > mid) {
        trade(i, Direction::kSellX, volume);
      } else {
        const double new_x = p.reserve_x - volume;
        trade(i, Direction::kBuyX, k / new_x - p.reserve_y);
      }
      traded = true;
    }
    if (!traded) break;
  }
}

void World::adversary_step(std::uint64_t t) {
  for (const AdversaryAction& a : cfg_.schedule) {
    if (a.step != t) continue;
    const Pool before = pools_[a.pool];
    const double reserve =
        a.direction == Direction::kSellX ? before.reserve_x : before.reserve_y;
    const double amount = a.size_fraction * reserve;
    const SwapResult r = a.direction == Direction::kSellX ? swap_x_for_y(before, amount)
                                                          : swap_y_for_x(before, amount);
    pools_[a.pool] = r.pool;
    if (a.reverse) {
      const Direction back =
          a.direction == Direction::kSellX ? Direction::kBuyX : Direction::kSellX;
      pending_.push_back({t + 1, a.pool, back, r.amount_out});
    }
  }
}

std::vector<double> World::step(std::uint64_t t) {
  for (auto it = pending_.begin(); it != pending_.end();) {
    if (it->step == t) {
      trade(it->pool, it->direction, it->amount);
      it = pending_.erase(it);
    } else {
      ++it;
    }
  }
  trader_step();
  arbitrage_step();
  adversary_step(t);
  return spot_prices();
}

}  // namespace acon2::amm
