#include "acon2/mvp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace acon2 {
namespace {

struct Threshold {
  double tau;
  std::size_t slot;
};

double weight(const MvpState& s, std::size_t i) {
  const double x = s.cfg.eta * s.v[i] / f_potential(s.n[i]);
  return std::exp(x) - std::exp(-x);
}

// The sign-change scan over per-slot weights.
Threshold next_threshold(MvpState& s) {
  const std::size_t m = s.cfg.m;
  const double md = static_cast<double>(m);
  const double tau_max = s.cfg.tau_max;
  auto clamp = [&](double tau) { return std::clamp(tau, 0.0, tau_max); };

  double w_prev = weight(s, 0);
  bool pos = w_prev > 0.0;
  for (std::size_t i = 1; i < m; ++i) {
    const double w = weight(s, i);
    if (w > 0.0) pos = true;
    if (w * w_prev <= 0.0) {
      const double denom = std::abs(w) + std::abs(w_prev);
      const double b = denom == 0.0 ? 1.0 : std::abs(w) / denom;
      const double id = static_cast<double>(i);
      if (s.rng.uniform() <= b) {
        return {clamp(1.0 - tau_max * (id / md - 1.0 / (s.cfg.r * md))), i - 1};
      }
      return {clamp(1.0 - tau_max * (id / md)), i};
    }
    w_prev = w;
  }
  if (pos) return {tau_max, 0};
  return {0.0, m - 1};
}

}  // namespace

void validate(const MvpConfig& cfg) {
  if (cfg.m < 2) throw std::invalid_argument("mvp.m must be at least 2");
  if (!(cfg.tau_max > 0.0)) throw std::invalid_argument("mvp.tau_max must be positive");
  if (!(cfg.eta > 0.0)) throw std::invalid_argument("mvp.eta must be positive");
  if (!(cfg.r >= 1.0)) throw std::invalid_argument("mvp.r must be at least 1");
  if (!(cfg.alpha_k > 0.0 && cfg.alpha_k < 1.0)) {
    throw std::invalid_argument("mvp.alpha_k must lie in (0, 1)");
  }
  if (cfg.strict_eta) {
    const double md = static_cast<double>(cfg.m);
    const double lo = std::sqrt(std::log(md) / (6.8 * md));
    const double hi = std::sqrt(std::log(md) / (6.6 * md));
    if (cfg.eta < lo || cfg.eta > hi) {
      throw std::invalid_argument("mvp.eta=" + std::to_string(cfg.eta) +
                                  " outside the strict range [" + std::to_string(lo) + ", " +
                                  std::to_string(hi) + "]");
    }
  }
}

double f_potential(std::uint64_t n) {
  const double nd = static_cast<double>(n);
  const double lg = std::log2(nd + 2.0);
  return std::sqrt((nd + 1.0) * lg * lg);
}

std::size_t bin_index(std::size_t m, double tau_max, double value) {
  if (value <= 0.0) return 1;
  if (value >= tau_max) return m;
  const auto i = static_cast<std::size_t>(std::floor(value / tau_max * static_cast<double>(m)));
  return std::min(i + 1, m);
}

MvpState make_mvp_state(const MvpConfig& cfg) {
  validate(cfg);
  MvpState s;
  s.cfg = cfg;
  s.n.assign(cfg.m, 0);
  s.v.assign(cfg.m, 0.0);
  s.rng = SplitMix64(cfg.seed);
  const Threshold t = next_threshold(s);
  s.tau = t.tau;
  s.slot = t.slot;
  return s;
}

MvpState mvp_update(MvpState state, bool covered) {
  const double err = covered ? 0.0 : 1.0;
  state.n[state.slot] += 1;
  state.v[state.slot] += state.cfg.alpha_k - err;
  ++state.updates;
  const Threshold t = next_threshold(state);
  state.tau = t.tau;
  state.slot = t.slot;
  return state;
}

}  // namespace acon2
