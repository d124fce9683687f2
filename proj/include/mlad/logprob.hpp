#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <limits>

#include "mlad/error.hpp"

namespace mlad {

/// Natural-log probability. Never NaN; -inf marks an impossible event.
class LogProb {
public:
  constexpr LogProb() = default;
  explicit LogProb(double value) : value_(value) {
    if (std::isnan(value)) throw InvalidArgument("log-probability is NaN");
  }

  static LogProb impossible() { return LogProb(-std::numeric_limits<double>::infinity()); }
  static LogProb certain() { return LogProb(0.0); }

  double value() const noexcept { return value_; }
  double probability() const { return std::exp(value_); }
  bool is_impossible() const noexcept { return std::isinf(value_) && value_ < 0; }

  LogProb& operator+=(LogProb other) {
    value_ += other.value_;
    return *this;
  }
  friend LogProb operator+(LogProb a, LogProb b) { return a += b; }
  friend auto operator<=>(const LogProb&, const LogProb&) = default;

private:
  double value_ = 0.0;
};

/// Scores within this log-space distance of each other count as ties.
inline constexpr double kTieTolerance = 1e-9;

/// a <= b up to kTieTolerance (relative for large magnitudes).
inline bool score_leq(double a, double b) {
  if (a <= b) return true;
  if (std::isinf(a) || std::isinf(b)) return false;
  return a - b <= kTieTolerance * std::max(1.0, std::abs(b));
}

}  // namespace mlad
