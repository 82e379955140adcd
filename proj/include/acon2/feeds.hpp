#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "acon2/consensus.hpp"
#include "acon2/metrics.hpp"
#include "acon2/oracle.hpp"

namespace acon2 {

struct Tick {
  std::int64_t timestamp = 0;
  std::vector<std::optional<double>> prices;  // one slot per source, header order
};

struct Feed {
  std::vector<std::string> sources;
  std::vector<Tick> ticks;
};

// Malformed CSV input. row is the 1-based data row (the header is row 0),
// line the 1-based line in the file, column the header name when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string source, std::size_t row, std::size_t line, std::string column,
             const std::string& what);

  const std::string& source() const { return source_; }
  std::size_t row() const { return row_; }
  std::size_t line() const { return line_; }
  const std::string& column() const { return column_; }

 private:
  std::string source_;
  std::size_t row_;
  std::size_t line_;
  std::string column_;
};

// Header: a timestamp column, then one column per source. Empty cells are
// missing prices; every row needs at least one price and timestamps must be
// strictly increasing integers.
Feed parse_csv(std::istream& in, const std::string& source_name = "<input>");
Feed read_csv(const std::string& path);

enum class NuPolicy { kZero, kFirstTickSpread, kExplicit };

struct ReplayOptions {
  ConsensusConfig consensus;
  NuPolicy nu_policy = NuPolicy::kZero;  // kExplicit uses consensus.nu as given
  // TWAP baseline over one source's price; nullopt disables it.
  std::optional<std::size_t> twap_source;
  std::int64_t twap_window_seconds = 1800;
};

// Drives K base predictors through a stream of ticks: predict every source,
// vote, then feed each present label back. A missing source contributes an
// Empty base interval and its predictor is left untouched.
class Replayer {
 public:
  // `sigma_predictors` is either empty or one per source; when given it runs
  // the one-standard-deviation consensus alongside as a baseline.
  Replayer(std::vector<BasePredictor> predictors, ReplayOptions options,
           std::vector<BasePredictor> sigma_predictors = {});

  StepRecord step(const Tick& tick);

  const ConsensusConfig& consensus_config() const { return options_.consensus; }
  const std::vector<BasePredictor>& predictors() const { return predictors_; }

 private:
  std::vector<BasePredictor> predictors_;
  std::vector<BasePredictor> sigma_;
  ReplayOptions options_;
  std::optional<TwapWindow> twap_;
  std::optional<std::int64_t> last_timestamp_;
  std::uint64_t steps_ = 0;
  std::uint64_t misses_ = 0;
};

std::vector<StepRecord> replay(std::span<const Tick> ticks, std::vector<BasePredictor> predictors,
                               const ReplayOptions& options);

}  // namespace acon2
