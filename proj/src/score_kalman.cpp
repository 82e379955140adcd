#include "acon2/score_kalman.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace acon2 {

double KalmanScoreState::w() const { return std::exp(w_bar); }
double KalmanScoreState::v() const { return std::exp(v_bar); }

KalmanScoreState make_kalman_state(const KalmanSettings& settings, double first_price) {
  KalmanScoreState s;
  s.mu = first_price;
  s.w_bar = std::max(settings.w_bar0, settings.w_bar_floor);
  s.v_bar = settings.v_bar0;
  s.w_bar_floor = settings.w_bar_floor;
  s.gamma_noise = settings.gamma_noise;
  s.max_log_step = settings.max_log_step;
  s.sigma2 = settings.sigma2_init > 0.0 ? settings.sigma2_init : std::exp(2.0 * settings.v_bar0);
  return s;
}

GaussianParams predictive_params(const KalmanScoreState& state) {
  const double w = state.w();
  const double v = state.v();
  return {state.mu, state.sigma2 + w * w + v * v};
}

double score(const KalmanScoreState& state, double y) {
  // N(y) / (2 N(mu)) reduces to a pure exponential; the normalising
  // constants cancel.
  const auto [mean, variance] = predictive_params(state);
  const double d = y - mean;
  return 0.5 * std::exp(-d * d / (2.0 * variance));
}

KalmanScoreState kalman_update(KalmanScoreState state, double y) {
  const double w = state.w();
  const double v = state.v();
  const double prior = state.sigma2 + w * w;
  const double gain = prior / (prior + v * v);
  state.mu = state.mu + gain * (y - state.mu);
  state.sigma2 = (1.0 - gain) * prior;
  // A huge w against a tiny v can round the posterior to zero.
  if (!(state.sigma2 > 0.0)) state.sigma2 = std::numeric_limits<double>::min();
  return state;
}

NoiseGradient noise_gradient(const KalmanScoreState& state, double y) {
  const double w = state.w();
  const double v = state.v();
  const double xi2 = state.sigma2 + w * w + v * v;
  const double xi = std::sqrt(xi2);
  const double d = y - state.mu;
  // d/dxi of ln(xi) + d^2 / (2 xi^2)
  const double dxi = 1.0 / xi - d * d / (xi2 * xi);
  // dxi/dw = w/xi and dw/dw_bar = w
  return {dxi * (w / xi) * w, dxi * (v / xi) * v};
}

KalmanScoreState noise_update(KalmanScoreState state, double y) {
  const NoiseGradient g = noise_gradient(state, y);
  const double cap = state.max_log_step;
  const double dw = std::clamp(state.gamma_noise * g.w_bar, -cap, cap);
  const double dv = std::clamp(state.gamma_noise * g.v_bar, -cap, cap);
  state.w_bar = std::max(state.w_bar - dw, state.w_bar_floor);
  state.v_bar = state.v_bar - dv;
  return state;
}

Interval level_set(const KalmanScoreState& state, double tau) {
  if (tau <= 0.0) return Interval::full_line();
  // score(y) >= tau  <=>  (y - mu)^2 / var <= -2 ln(2 tau)
  const double c = -2.0 * std::log(2.0 * tau);
  if (c < 0.0) return Interval::empty();
  const auto [mean, variance] = predictive_params(state);
  const double half = std::sqrt(variance * c);
  return Interval::bounded(mean - half, mean + half);
}

}  // namespace acon2
