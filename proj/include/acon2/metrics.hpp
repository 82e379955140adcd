#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "acon2/interval.hpp"

namespace acon2 {

// One evaluated time step of a consensus run.
struct StepRecord {
  std::uint64_t index = 0;  // 1-based step number
  std::int64_t timestamp = 0;
  std::vector<std::optional<double>> labels;  // per source, nullopt when missing
  std::vector<Interval> base;                 // per source, before inflation
  std::vector<Interval> inflated;             // per source, after inflation
  Interval consensus;
  double pseudo_label = 0.0;                  // median of the present labels
  bool miscover = false;
  bool idk = false;
  std::optional<double> size;                 // bounded consensus only
  double running_miscoverage = 0.0;           // mean of miscover over steps 1..index

  // Baselines.
  std::optional<double> twap;
  std::optional<Interval> sigma_consensus;
  bool sigma_miscover = false;
};

// Median; an even count averages the two middle values. Throws
// std::invalid_argument on empty input.
double pseudo_label(std::span<const double> prices);

// 1(label not in consensus): Empty always misses, FullLine never does.
bool miscovers(const Interval& consensus, double label);

// Mean of the miscover flags. Throws std::invalid_argument when there are no
// records.
double miscoverage_rate(std::span<const StepRecord> records);
double miscoverage_rate(std::span<const bool> flags);

// Running mean after each flag.
std::vector<double> prefix_miscoverage(std::span<const bool> flags);

// Width of a bounded interval; nullopt for Empty (counted as IDK) and the
// full line (reported as unbounded).
std::optional<double> set_size(const Interval& iv);

// (c1 - c0) / (t1 - t0) over cumulative price sum(spot * dt). Throws
// std::invalid_argument unless t1 > t0.
double twap(double c0, double c1, double t0, double t1);

// Sliding-window TWAP over a piecewise-constant spot price. Each observed spot
// holds from its timestamp until the next observation, so the newest price
// only starts to weigh in once time advances past it.
class TwapWindow {
 public:
  explicit TwapWindow(std::int64_t window_seconds);

  // Timestamps must be strictly increasing.
  void observe(std::int64_t timestamp, double spot);
  // nullopt before the first observation; the spot itself until time has
  // elapsed.
  std::optional<double> value() const;

  std::int64_t window() const { return window_; }

 private:
  struct Point {
    std::int64_t timestamp;
    double cumulative;  // sum of spot * dt up to timestamp
  };

  std::int64_t window_;
  std::deque<Point> points_;
  double last_spot_ = 0.0;
};

// Linear-interpolated empirical quantile, q in [0, 1]. Throws on empty input.
double quantile(std::vector<double> values, double q);

struct Summary {
  std::size_t steps = 0;
  std::size_t warmup = 0;
  double miscoverage = 0.0;             // all steps
  double miscoverage_after_warmup = 0.0;
  std::size_t idk_count = 0;
  std::size_t full_line_count = 0;
  double idk_fraction = 0.0;
  // Quantiles 0, 0.1, 0.25, 0.5, 0.75, 0.9, 1 of bounded consensus sizes.
  std::vector<double> size_quantiles;
  double mean_size = 0.0;
  std::vector<double> base_miscoverage;  // per source, against its own label
  std::optional<double> sigma_miscoverage;
  std::optional<double> sigma_mean_size;
  std::optional<double> twap_mean_abs_error;  // against the pseudo label
};

inline constexpr double kSizeQuantileLevels[] = {0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0};

// Throws std::invalid_argument when there are no records.
Summary summarize(std::span<const StepRecord> records, std::size_t warmup);

}  // namespace acon2
