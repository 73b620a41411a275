// Core value types for spatio-temporal pattern mining.
#pragma once

#include <array>
#include <algorithm>
#include <cmath>
#include <limits>

namespace stpm {

// Alignment value used when the formula is undefined (zero-energy signal or
// zero reference mean). It sorts strictly below every real, so threshold and
// dominance comparisons treat it as worst.
inline constexpr double kUndefinedAlignment =
    -std::numeric_limits<double>::infinity();

inline bool alignment_defined(double a) { return std::isfinite(a); }

struct SensorPosition {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

// Per-axis weights of the ellipsoidal distance; all strictly positive.
struct Weights {
  double w1 = 1.0;
  double w2 = 1.0;
  double w3 = 1.0;

  bool valid() const {
    return w1 > 0.0 && w2 > 0.0 && w3 > 0.0 && std::isfinite(w1) &&
           std::isfinite(w2) && std::isfinite(w3);
  }
};

// Closed time interval [t1, t2], 1-based, with t1 < t2.
// length() follows the t2 - t1 convention; steps() counts touched cells.
struct Interval {
  int t1 = 1;
  int t2 = 2;

  int length() const { return t2 - t1; }
  int steps() const { return t2 - t1 + 1; }

  bool operator==(const Interval&) const = default;
};

// Number of shared time indices of two closed intervals.
inline int shared_steps(const Interval& a, const Interval& b) {
  return std::max(0, std::min(a.t2, b.t2) - std::max(a.t1, b.t1) + 1);
}

// Overlap in length units (t2 - t1 convention), the measure used for
// support intersection.
inline int overlap_length(const Interval& a, const Interval& b) {
  return std::max(0, std::min(a.t2, b.t2) - std::max(a.t1, b.t1));
}

// Objective triple; alignment may be the undefined sentinel.
struct ScoreVector {
  int length = 0;
  int area = 0;
  double alignment = kUndefinedAlignment;

  bool operator==(const ScoreVector&) const = default;
};

// Search genotype: ellipsoid center sensor, axis weights, time interval,
// radius, plus self-adaptation step sizes for (w1, w2, w3, r).
struct PatternGenotype {
  int center = 1;
  Weights weights;
  Interval interval;
  double radius = 1.0;
  std::array<double, 4> step_sizes{0.11, 0.11, 0.11, 0.11};
};

}  // namespace stpm
