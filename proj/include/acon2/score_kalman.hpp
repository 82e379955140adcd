#pragma once

#include "acon2/interval.hpp"

namespace acon2 {

// Scalar random-walk Kalman model of one price source. The noise standard
// deviations are stored in log space (w = exp(w_bar), v = exp(v_bar)) and are
// learned online by gradient descent on the predictive negative log-likelihood.
//
// Invariants: sigma2 > 0, and w_bar >= w_bar_floor after every noise update.
struct KalmanScoreState {
  double mu = 0.0;
  double sigma2 = 1.0;
  double w_bar = 0.0;
  double v_bar = 0.0;
  double gamma_noise = 1e-3;
  double w_bar_floor = -1e300;
  // Largest change of w_bar or v_bar per update. One far outlier against a
  // tight fit would otherwise push exp(w_bar) to overflow.
  double max_log_step = 1.0;

  double w() const;
  double v() const;
};

struct KalmanSettings {
  double w_bar0 = 4.6;
  double v_bar0 = 4.6;
  double w_bar_floor = 4.6;
  double gamma_noise = 1e-3;
  double max_log_step = 1.0;
  // Variance of the state right after the first observation. <= 0 selects
  // exp(2 * v_bar0), the observation noise variance.
  double sigma2_init = 0.0;
};

// State centred on a first observation.
KalmanScoreState make_kalman_state(const KalmanSettings& settings, double first_price);

struct GaussianParams {
  double mean = 0.0;
  double variance = 1.0;
};

// Predictive Gaussian N(mu, sigma2 + w^2 + v^2) for the next observation.
GaussianParams predictive_params(const KalmanScoreState& state);

// Predictive density scaled so that its peak is 1/2: score(mu) = 0.5 and the
// score decays symmetrically in |y - mu|.
double score(const KalmanScoreState& state, double y);

// Standard correction step (gain applied with a "+" sign).
KalmanScoreState kalman_update(KalmanScoreState state, double y);

struct NoiseGradient {
  double w_bar = 0.0;
  double v_bar = 0.0;
};

// Gradient of -ln N(y; mu, sigma2 + w^2 + v^2) with respect to (w_bar, v_bar).
NoiseGradient noise_gradient(const KalmanScoreState& state, double y);

// One gradient step on (w_bar, v_bar), each clipped to max_log_step, then
// w_bar is floored at w_bar_floor.
KalmanScoreState noise_update(KalmanScoreState state, double y);

// {y : score(state, y) >= tau}. tau <= 0 gives the full line and tau above
// the score maximum gives Empty.
Interval level_set(const KalmanScoreState& state, double tau);

}  // namespace acon2
