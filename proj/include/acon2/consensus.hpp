#pragma once

#include <cstddef>
#include <span>

#include "acon2/interval.hpp"

namespace acon2 {

struct ConsensusConfig {
  std::size_t k = 1;          // number of sources
  std::size_t beta_hat = 0;   // sources the adversary may control
  double nu = 0.0;            // inflation margin applied before voting

  std::size_t votes_needed() const { return k - beta_hat; }
};

// floor(K/2), the default assumed number of manipulable sources.
std::size_t default_beta_hat(std::size_t k);

// Throws std::invalid_argument unless K >= 1, beta_hat < K and nu >= 0.
void validate(const ConsensusConfig& cfg);

// [m - (d + nu), m + (d + nu)] for a bounded [a, b] with midpoint m and
// half-width d. Empty and FullLine pass through.
Interval inflate(const Interval& iv, double nu);

// Exact voting predicate: y lies in at least K - beta_hat of the intervals.
// Requires ivs.size() == cfg.k.
bool consensus_membership(double y, std::span<const Interval> ivs, const ConsensusConfig& cfg);

// Hull of the interval endpoints that win the vote, or Empty when none does.
// Because every input is convex, this contains every point that wins the
// vote. When at least K - beta_hat inputs are the full line every label wins
// and the consensus is the full line.
Interval consensus_interval(std::span<const Interval> ivs, const ConsensusConfig& cfg);

}  // namespace acon2
