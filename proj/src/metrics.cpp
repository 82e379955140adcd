#include "acon2/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace acon2 {

double pseudo_label(std::span<const double> prices) {
  if (prices.empty()) throw std::invalid_argument("median of no prices");
  std::vector<double> v(prices.begin(), prices.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  if (v.size() % 2 == 1) return v[mid];
  const double upper = v[mid];
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

bool miscovers(const Interval& consensus, double label) { return !consensus.contains(label); }

double miscoverage_rate(std::span<const bool> flags) {
  if (flags.empty()) throw std::invalid_argument("miscoverage rate of zero steps");
  const auto misses = std::count(flags.begin(), flags.end(), true);
  return static_cast<double>(misses) / static_cast<double>(flags.size());
}

double miscoverage_rate(std::span<const StepRecord> records) {
  if (records.empty()) throw std::invalid_argument("miscoverage rate of zero steps");
  const auto misses =
      std::count_if(records.begin(), records.end(), [](const StepRecord& r) { return r.miscover; });
  return static_cast<double>(misses) / static_cast<double>(records.size());
}

std::vector<double> prefix_miscoverage(std::span<const bool> flags) {
  std::vector<double> out;
  out.reserve(flags.size());
  std::size_t misses = 0;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    misses += flags[i] ? 1 : 0;
    out.push_back(static_cast<double>(misses) / static_cast<double>(i + 1));
  }
  return out;
}

std::optional<double> set_size(const Interval& iv) {
  if (!iv.is_bounded()) return std::nullopt;
  return iv.width();
}

double twap(double c0, double c1, double t0, double t1) {
  if (!(t1 > t0)) throw std::invalid_argument("TWAP window must have t1 > t0");
  return (c1 - c0) / (t1 - t0);
}

TwapWindow::TwapWindow(std::int64_t window_seconds) : window_(window_seconds) {
  if (window_seconds < 1) throw std::invalid_argument("TWAP window must be at least 1 second");
}

void TwapWindow::observe(std::int64_t timestamp, double spot) {
  if (points_.empty()) {
    points_.push_back({timestamp, 0.0});
  } else {
    const Point& last = points_.back();
    if (timestamp <= last.timestamp) {
      throw std::invalid_argument("TWAP observations must have increasing timestamps");
    }
    points_.push_back(
        {timestamp, last.cumulative + last_spot_ * static_cast<double>(timestamp - last.timestamp)});
  }
  last_spot_ = spot;
  // Keep one point at or before the window start for interpolation.
  const std::int64_t start = timestamp - window_;
  while (points_.size() >= 2 && points_[1].timestamp <= start) points_.pop_front();
}

std::optional<double> TwapWindow::value() const {
  if (points_.empty()) return std::nullopt;
  const Point& now = points_.back();
  if (points_.size() == 1) return last_spot_;
  const Point& first = points_.front();
  const std::int64_t start = std::max(first.timestamp, now.timestamp - window_);
  // Cumulative price at `start`, linear inside the segment beginning at `first`.
  double c_start = first.cumulative;
  if (start > first.timestamp) {
    const Point& next = points_[1];
    const double frac = static_cast<double>(start - first.timestamp) /
                        static_cast<double>(next.timestamp - first.timestamp);
    c_start = first.cumulative + frac * (next.cumulative - first.cumulative);
  }
  return twap(c_start, now.cumulative, static_cast<double>(start),
              static_cast<double>(now.timestamp));
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of no values");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

Summary summarize(std::span<const StepRecord> records, std::size_t warmup) {
  if (records.empty()) throw std::invalid_argument("summary of zero steps");
  Summary s;
  s.steps = records.size();
  s.warmup = std::min(warmup, records.size() - 1);
  s.miscoverage = miscoverage_rate(records);
  s.miscoverage_after_warmup = miscoverage_rate(records.subspan(s.warmup));

  std::vector<double> sizes;
  const std::size_t k = records.front().base.size();
  std::vector<std::size_t> base_misses(k, 0);
  std::vector<std::size_t> base_seen(k, 0);
  std::size_t sigma_steps = 0;
  std::size_t sigma_misses = 0;
  double sigma_size_sum = 0.0;
  std::size_t sigma_sized = 0;
  double twap_err_sum = 0.0;
  std::size_t twap_steps = 0;

  for (const StepRecord& r : records) {
    if (r.idk) ++s.idk_count;
    if (r.consensus.is_full_line()) ++s.full_line_count;
    if (r.size) sizes.push_back(*r.size);
    for (std::size_t j = 0; j < k && j < r.labels.size(); ++j) {
      if (!r.labels[j]) continue;
      ++base_seen[j];
      if (!r.base[j].contains(*r.labels[j])) ++base_misses[j];
    }
    if (r.sigma_consensus) {
      ++sigma_steps;
      if (r.sigma_miscover) ++sigma_misses;
      if (auto sz = set_size(*r.sigma_consensus)) {
        sigma_size_sum += *sz;
        ++sigma_sized;
      }
    }
    if (r.twap) {
      twap_err_sum += std::abs(*r.twap - r.pseudo_label);
      ++twap_steps;
    }
  }

  s.idk_fraction = static_cast<double>(s.idk_count) / static_cast<double>(s.steps);
  if (!sizes.empty()) {
    for (double q : kSizeQuantileLevels) s.size_quantiles.push_back(quantile(sizes, q));
    double sum = 0.0;
    for (double x : sizes) sum += x;
    s.mean_size = sum / static_cast<double>(sizes.size());
  }
  for (std::size_t j = 0; j < k; ++j) {
    s.base_miscoverage.push_back(base_seen[j] == 0 ? 0.0
                                                   : static_cast<double>(base_misses[j]) /
                                                         static_cast<double>(base_seen[j]));
  }
  if (sigma_steps > 0) {
    s.sigma_miscoverage = static_cast<double>(sigma_misses) / static_cast<double>(sigma_steps);
    if (sigma_sized > 0) s.sigma_mean_size = sigma_size_sum / static_cast<double>(sigma_sized);
  }
  if (twap_steps > 0) s.twap_mean_abs_error = twap_err_sum / static_cast<double>(twap_steps);
  return s;
}

}  // namespace acon2
