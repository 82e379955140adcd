#pragma once

#include <iosfwd>
#include <string>

namespace acon2 {

// A closed price interval, the empty set, or the whole real line.
//
// Empty is the "I don't know" answer of a consensus and the answer of a level
// set above the score maximum. FullLine is the level set at threshold zero.
class Interval {
 public:
  enum class Kind { kEmpty, kBounded, kFullLine };

  Interval() = default;

  static Interval empty() { return Interval(); }
  static Interval full_line();
  // Throws std::invalid_argument when lo > hi or either bound is NaN.
  static Interval bounded(double lo, double hi);

  Kind kind() const { return kind_; }
  bool is_empty() const { return kind_ == Kind::kEmpty; }
  bool is_bounded() const { return kind_ == Kind::kBounded; }
  bool is_full_line() const { return kind_ == Kind::kFullLine; }

  // Only meaningful for bounded intervals; FullLine reports +-infinity.
  double lo() const;
  double hi() const;

  bool contains(double y) const;
  // Set inclusion, with Empty a subset of everything.
  bool subset_of(const Interval& other) const;
  double width() const;

  std::string to_string() const;

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  Interval(Kind kind, double lo, double hi) : kind_(kind), lo_(lo), hi_(hi) {}

  Kind kind_ = Kind::kEmpty;
  double lo_ = 0.0;
  double hi_ = 0.0;
};

std::ostream& operator<<(std::ostream& os, const Interval& iv);

const char* kind_name(Interval::Kind kind);

}  // namespace acon2
