#include "acon2/interval.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "acon2/format.hpp"

namespace acon2 {

Interval Interval::full_line() {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return Interval(Kind::kFullLine, -inf, inf);
}

Interval Interval::bounded(double lo, double hi) {
  if (std::isnan(lo) || std::isnan(hi)) {
    throw std::invalid_argument("interval bound is NaN");
  }
  if (lo > hi) {
    throw std::invalid_argument("interval lower bound exceeds upper bound: " +
                                format_double(lo) + " > " + format_double(hi));
  }
  return Interval(Kind::kBounded, lo, hi);
}

double Interval::lo() const {
  return kind_ == Kind::kEmpty ? std::numeric_limits<double>::quiet_NaN() : lo_;
}

double Interval::hi() const {
  return kind_ == Kind::kEmpty ? std::numeric_limits<double>::quiet_NaN() : hi_;
}

bool Interval::contains(double y) const {
  switch (kind_) {
    case Kind::kEmpty:
      return false;
    case Kind::kFullLine:
      return true;
    case Kind::kBounded:
      return lo_ <= y && y <= hi_;
  }
  return false;
}

bool Interval::subset_of(const Interval& other) const {
  if (is_empty() || other.is_full_line()) return true;
  if (other.is_empty() || is_full_line()) return false;
  return other.lo_ <= lo_ && hi_ <= other.hi_;
}

double Interval::width() const {
  switch (kind_) {
    case Kind::kEmpty:
      return 0.0;
    case Kind::kFullLine:
      return std::numeric_limits<double>::infinity();
    case Kind::kBounded:
      return hi_ - lo_;
  }
  return 0.0;
}

std::string Interval::to_string() const {
  switch (kind_) {
    case Kind::kEmpty:
      return "empty";
    case Kind::kFullLine:
      return "(-inf,inf)";
    case Kind::kBounded:
      return "[" + format_double(lo_) + "," + format_double(hi_) + "]";
  }
  return {};
}

std::ostream& operator<<(std::ostream& os, const Interval& iv) {
  return os << iv.to_string();
}

const char* kind_name(Interval::Kind kind) {
  switch (kind) {
    case Interval::Kind::kEmpty:
      return "empty";
    case Interval::Kind::kBounded:
      return "bounded";
    case Interval::Kind::kFullLine:
      return "full";
  }
  return "?";
}

}  // namespace acon2
