#pragma once

#include <optional>

#include "acon2/interval.hpp"
#include "acon2/mvp.hpp"
#include "acon2/score_kalman.hpp"

namespace acon2 {

enum class PredictorKind { kMvpKalman, kSigmaBps };

const char* kind_name(PredictorKind kind);

// Base prediction set for one source: a Kalman conformity score with an
// adaptive threshold (kMvpKalman), or the fixed one-standard-deviation band of
// the same Kalman model (kSigmaBps, where the MVP state is carried but unused).
//
// The Kalman mean is anchored on the first observed price; before that the
// predictor answers with the full line and the first observation only
// initialises the score model.
class BasePredictor {
 public:
  BasePredictor(PredictorKind kind, const KalmanSettings& kalman, const MvpConfig& mvp);

  Interval predict() const;
  // Fold in the label for the step whose interval was already taken.
  void observe(double y);

  PredictorKind kind() const { return kind_; }
  bool initialized() const { return score_.has_value(); }
  // Requires initialized().
  const KalmanScoreState& score_state() const { return *score_; }
  const MvpState& mvp_state() const { return mvp_; }

 private:
  PredictorKind kind_;
  KalmanSettings kalman_;
  std::optional<KalmanScoreState> score_;
  MvpState mvp_;
};

}  // namespace acon2
