#include "acon2/oracle.hpp"

#include <cmath>

namespace acon2 {

const char* kind_name(PredictorKind kind) {
  return kind == PredictorKind::kMvpKalman ? "mvp_kalman" : "sigma_bps";
}

BasePredictor::BasePredictor(PredictorKind kind, const KalmanSettings& kalman,
                             const MvpConfig& mvp)
    : kind_(kind), kalman_(kalman), mvp_(make_mvp_state(mvp)) {}

Interval BasePredictor::predict() const {
  if (!score_) return Interval::full_line();
  if (kind_ == PredictorKind::kSigmaBps) {
    const auto [mean, variance] = predictive_params(*score_);
    const double sd = std::sqrt(variance);
    return Interval::bounded(mean - sd, mean + sd);
  }
  return level_set(*score_, mvp_.tau);
}

void BasePredictor::observe(double y) {
  if (!score_) {
    score_ = make_kalman_state(kalman_, y);
    return;
  }
  if (kind_ == PredictorKind::kMvpKalman) {
    const bool covered = predict().contains(y);
    mvp_ = mvp_update(std::move(mvp_), covered);
  }
  *score_ = kalman_update(noise_update(*score_, y), y);
}

}  // namespace acon2
