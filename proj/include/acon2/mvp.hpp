#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "acon2/rng.hpp"

namespace acon2 {

struct MvpConfig {
  std::size_t m = 100;   // number of threshold bins
  double tau_max = 1.0;
  double eta = 5.0;
  double r = 1000.0;     // sub-bin granularity
  double alpha_k = 0.1;  // target miscoverage for this source
  std::uint64_t seed = 0;
  // Reject eta outside sqrt(ln m / 6.8m) <= eta <= sqrt(ln m / 6.6m).
  bool strict_eta = false;
};

// Throws std::invalid_argument naming the offending field.
void validate(const MvpConfig& cfg);

// Multivalid threshold learner with a single group.
//
// Bins partition the complementary threshold q = tau_max - tau, so slot i
// (0-based) holds q in [tau_max i/m, tau_max (i+1)/m), the last slot closed.
// In q the accumulated (alpha - err) is increasing, which is the ordering the
// sign-change scan relies on.
struct MvpState {
  MvpConfig cfg;
  std::vector<std::uint64_t> n;  // visits per slot
  std::vector<double> v;         // accumulated alpha - err per slot
  double tau = 0.0;              // current threshold, in [0, tau_max]
  std::size_t slot = 0;          // slot of the current threshold
  std::uint64_t updates = 0;
  SplitMix64 rng;
};

// sqrt((n + 1) log2(n + 2)^2)
double f_potential(std::uint64_t n);

// 1-based index i with value in B_i = [tau_max (i-1)/m, tau_max i/m); the last
// bin is closed, so value == tau_max maps to m.
std::size_t bin_index(std::size_t m, double tau_max, double value);

// Fresh state. The first threshold comes from the scan over all-zero
// accumulators, which deterministically picks tau = 1 - tau_max (1/m - 1/(rm)).
MvpState make_mvp_state(const MvpConfig& cfg);

// Record whether the label fell in the set built with state.tau, then pick
// the next threshold.
MvpState mvp_update(MvpState state, bool covered);

}  // namespace acon2
