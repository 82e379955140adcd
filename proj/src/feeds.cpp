#include "acon2/feeds.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <string_view>

namespace acon2 {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::string describe(std::size_t row, std::size_t line, const std::string& column) {
  std::string out = "row " + std::to_string(row) + " (line " + std::to_string(line) + ")";
  if (!column.empty()) out += ", column " + column;
  return out;
}

}  // namespace

ParseError::ParseError(std::string source, std::size_t row, std::size_t line, std::string column,
                       const std::string& what)
    : std::runtime_error(source + ": " + describe(row, line, column) + ": " + what),
      source_(std::move(source)),
      row_(row),
      line_(line),
      column_(std::move(column)) {}

Feed parse_csv(std::istream& in, const std::string& source_name) {
  Feed feed;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;

  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  if (trim(line).empty()) throw ParseError(source_name, 0, line_no, "", "missing header row");
  for (std::string_view cell : split(line)) header.emplace_back(cell);
  if (header.size() < 2) {
    throw ParseError(source_name, 0, line_no, "", "header needs a timestamp and a source column");
  }
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c].empty()) throw ParseError(source_name, 0, line_no, "", "empty column name");
    for (std::size_t d = 0; d < c; ++d) {
      if (header[c] == header[d]) {
        throw ParseError(source_name, 0, line_no, header[c], "duplicate column name");
      }
    }
  }
  feed.sources.assign(header.begin() + 1, header.end());

  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    ++row;
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      throw ParseError(source_name, row, line_no, "",
                       "expected " + std::to_string(header.size()) + " cells, found " +
                           std::to_string(cells.size()));
    }
    Tick tick;
    {
      const std::string_view ts = cells[0];
      auto [ptr, ec] = std::from_chars(ts.data(), ts.data() + ts.size(), tick.timestamp);
      if (ts.empty() || ec != std::errc() || ptr != ts.data() + ts.size()) {
        throw ParseError(source_name, row, line_no, header[0],
                         "unparsable timestamp '" + std::string(ts) + "'");
      }
    }
    if (!feed.ticks.empty()) {
      const std::int64_t prev = feed.ticks.back().timestamp;
      if (tick.timestamp == prev) {
        throw ParseError(source_name, row, line_no, header[0],
                         "duplicate timestamp " + std::to_string(tick.timestamp));
      }
      if (tick.timestamp < prev) {
        throw ParseError(source_name, row, line_no, header[0],
                         "timestamp " + std::to_string(tick.timestamp) + " is before " +
                             std::to_string(prev));
      }
    }
    bool any = false;
    for (std::size_t c = 1; c < cells.size(); ++c) {
      const std::string_view cell = cells[c];
      if (cell.empty()) {
        tick.prices.emplace_back();
        continue;
      }
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(value)) {
        throw ParseError(source_name, row, line_no, header[c],
                         "unparsable number '" + std::string(cell) + "'");
      }
      tick.prices.emplace_back(value);
      any = true;
    }
    if (!any) throw ParseError(source_name, row, line_no, "", "no source has a price");
    feed.ticks.push_back(std::move(tick));
  }
  return feed;
}

Feed read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, 0, "", "cannot open file");
  return parse_csv(in, path);
}

Replayer::Replayer(std::vector<BasePredictor> predictors, ReplayOptions options,
                   std::vector<BasePredictor> sigma_predictors)
    : predictors_(std::move(predictors)),
      sigma_(std::move(sigma_predictors)),
      options_(std::move(options)) {
  validate(options_.consensus);
  if (predictors_.size() != options_.consensus.k) {
    throw std::invalid_argument("need one predictor per source");
  }
  if (!sigma_.empty() && sigma_.size() != predictors_.size()) {
    throw std::invalid_argument("sigma baseline needs one predictor per source");
  }
  if (options_.twap_source) {
    if (*options_.twap_source >= options_.consensus.k) {
      throw std::invalid_argument("twap source index out of range");
    }
    twap_.emplace(options_.twap_window_seconds);
  }
}

StepRecord Replayer::step(const Tick& tick) {
  const std::size_t k = predictors_.size();
  if (tick.prices.size() != k) {
    throw std::invalid_argument("tick has " + std::to_string(tick.prices.size()) +
                                " prices for " + std::to_string(k) + " sources");
  }
  if (last_timestamp_ && tick.timestamp <= *last_timestamp_) {
    throw std::invalid_argument("tick timestamps must increase");
  }
  last_timestamp_ = tick.timestamp;

  std::vector<double> present;
  for (const auto& p : tick.prices) {
    if (p) present.push_back(*p);
  }
  if (present.empty()) throw std::invalid_argument("tick has no prices");

  if (steps_ == 0 && options_.nu_policy == NuPolicy::kFirstTickSpread) {
    const auto [lo, hi] = std::minmax_element(present.begin(), present.end());
    options_.consensus.nu = *hi - *lo;
  }
  const ConsensusConfig& cc = options_.consensus;

  StepRecord rec;
  rec.index = ++steps_;
  rec.timestamp = tick.timestamp;
  rec.labels = tick.prices;
  rec.base.reserve(k);
  rec.inflated.reserve(k);
  for (std::size_t j = 0; j < k; ++j) {
    rec.base.push_back(tick.prices[j] ? predictors_[j].predict() : Interval::empty());
    rec.inflated.push_back(inflate(rec.base.back(), cc.nu));
  }
  rec.consensus = consensus_interval(rec.inflated, cc);
  rec.pseudo_label = pseudo_label(present);
  rec.miscover = miscovers(rec.consensus, rec.pseudo_label);
  rec.idk = rec.consensus.is_empty();
  rec.size = set_size(rec.consensus);
  misses_ += rec.miscover ? 1 : 0;
  rec.running_miscoverage = static_cast<double>(misses_) / static_cast<double>(steps_);

  if (!sigma_.empty()) {
    std::vector<Interval> ivs;
    ivs.reserve(k);
    for (std::size_t j = 0; j < k; ++j) {
      ivs.push_back(tick.prices[j] ? inflate(sigma_[j].predict(), cc.nu) : Interval::empty());
    }
    rec.sigma_consensus = consensus_interval(ivs, cc);
    rec.sigma_miscover = miscovers(*rec.sigma_consensus, rec.pseudo_label);
  }
  if (twap_) {
    if (const auto& p = tick.prices[*options_.twap_source]) twap_->observe(tick.timestamp, *p);
    rec.twap = twap_->value();
  }

  for (std::size_t j = 0; j < k; ++j) {
    if (!tick.prices[j]) continue;
    predictors_[j].observe(*tick.prices[j]);
    if (!sigma_.empty()) sigma_[j].observe(*tick.prices[j]);
  }
  return rec;
}

std::vector<StepRecord> replay(std::span<const Tick> ticks, std::vector<BasePredictor> predictors,
                               const ReplayOptions& options) {
  Replayer replayer(std::move(predictors), options);
  std::vector<StepRecord> out;
  out.reserve(ticks.size());
  for (const Tick& t : ticks) out.push_back(replayer.step(t));
  return out;
}

}  // namespace acon2
