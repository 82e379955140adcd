#include "acon2/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace acon2 {
namespace {

void check_arity(std::span<const Interval> ivs, const ConsensusConfig& cfg) {
  if (ivs.size() != cfg.k) {
    throw std::invalid_argument("expected " + std::to_string(cfg.k) + " intervals, got " +
                                std::to_string(ivs.size()));
  }
}

}  // namespace

std::size_t default_beta_hat(std::size_t k) { return k / 2; }

void validate(const ConsensusConfig& cfg) {
  if (cfg.k < 1) throw std::invalid_argument("consensus.K must be at least 1");
  if (cfg.beta_hat >= cfg.k) {
    throw std::invalid_argument("consensus.beta_hat must be less than K (beta_hat=" +
                                std::to_string(cfg.beta_hat) + ", K=" + std::to_string(cfg.k) +
                                ")");
  }
  if (!(cfg.nu >= 0.0) || std::isinf(cfg.nu)) {
    throw std::invalid_argument("consensus.nu must be a finite value >= 0");
  }
}

Interval inflate(const Interval& iv, double nu) {
  if (!iv.is_bounded()) return iv;
  const double mid = 0.5 * (iv.lo() + iv.hi());
  const double half = mid - iv.lo();
  return Interval::bounded(mid - (half + nu), mid + (half + nu));
}

bool consensus_membership(double y, std::span<const Interval> ivs, const ConsensusConfig& cfg) {
  check_arity(ivs, cfg);
  const auto votes = std::count_if(ivs.begin(), ivs.end(),
                                   [y](const Interval& iv) { return iv.contains(y); });
  return static_cast<std::size_t>(votes) >= cfg.votes_needed();
}

Interval consensus_interval(std::span<const Interval> ivs, const ConsensusConfig& cfg) {
  check_arity(ivs, cfg);
  // Enough full-line votes make every label a winner. Otherwise a winner needs
  // at least one bounded vote, so the bounded endpoints are the only candidates.
  const auto full = std::count_if(ivs.begin(), ivs.end(),
                                  [](const Interval& iv) { return iv.is_full_line(); });
  if (static_cast<std::size_t>(full) >= cfg.votes_needed()) return Interval::full_line();

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const Interval& iv : ivs) {
    if (!iv.is_bounded()) continue;
    for (double y : {iv.lo(), iv.hi()}) {
      if (consensus_membership(y, ivs, cfg)) {
        lo = std::min(lo, y);
        hi = std::max(hi, y);
      }
    }
  }
  if (lo <= hi) return Interval::bounded(lo, hi);
  return Interval::empty();
}

}  // namespace acon2
