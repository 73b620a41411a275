// Objective-function mathematics: weighted distance, ellipsoid membership,
// interval alignment, and the (length, area, alignment) score triple.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "stpm/errors.hpp"
#include "stpm/recording.hpp"
#include "stpm/types.hpp"

namespace stpm {

// Activity-cell reads performed by the scoring routines; single-threaded
// diagnostic used to check evaluation cost against its expected bound.
inline thread_local std::uint64_t cell_touches = 0;

inline double weighted_distance(const SensorPosition& p,
                                const SensorPosition& q, const Weights& w) {
  const double dx = p.x - q.x;
  const double dy = p.y - q.y;
  const double dz = p.z - q.z;
  return std::sqrt(w.w1 * dx * dx + w.w2 * dy * dy + w.w3 * dz * dz);
}

// Sensors strictly within weighted distance r of the center (center always
// included). Sorted ascending.
inline std::vector<int> ball_members(const Recording& rec, int center,
                                     const Weights& w, double radius) {
  if (!(radius > 0.0)) throw DomainError("ball radius must be > 0");
  if (!rec.valid_sensor(center)) throw DomainError("ball center out of range");
  std::vector<int> members;
  const auto& c = rec.position(center);
  for (int j = 1; j <= rec.n_sensors(); ++j) {
    if (weighted_distance(c, rec.position(j), w) < radius) members.push_back(j);
  }
  return members;
}

// Arithmetic mean of the sensor's activity over [t1, t2], both inclusive.
inline double mean_activity(const Recording& rec, int sensor,
                            const Interval& I) {
  double sum = 0.0;
  for (int t = I.t1; t <= I.t2; ++t) sum += rec.activity(sensor, t);
  cell_touches += static_cast<std::uint64_t>(I.steps());
  return sum / I.steps();
}

// Interval alignment of sensors i and j: the (uncentered) cosine of the two
// signals over I, scaled by 1 - |mean_i - mean_j| / |mean_i|. Returns the
// undefined sentinel when either signal has zero energy over I or the
// reference mean is zero. Not symmetric in (i, j).
inline double alignment_pair(const Recording& rec, int i, int j,
                             const Interval& I) {
  double dot = 0.0, ni = 0.0, nj = 0.0, si = 0.0, sj = 0.0;
  for (int t = I.t1; t <= I.t2; ++t) {
    const double ci = rec.activity(i, t);
    const double cj = rec.activity(j, t);
    dot += ci * cj;
    ni += ci * ci;
    nj += cj * cj;
    si += ci;
    sj += cj;
  }
  cell_touches += 2 * static_cast<std::uint64_t>(I.steps());
  if (ni == 0.0 || nj == 0.0) return kUndefinedAlignment;
  const double mi = si / I.steps();
  const double mj = sj / I.steps();
  if (mi == 0.0) return kUndefinedAlignment;
  const double cosine = dot / std::sqrt(ni * nj);
  return cosine * (1.0 - std::abs(mi - mj) / std::abs(mi));
}

// Largest weighted pairwise distance between sensors.
inline double recording_diameter(const Recording& rec, const Weights& w) {
  double diam = 0.0;
  for (int i = 1; i <= rec.n_sensors(); ++i) {
    for (int j = i + 1; j <= rec.n_sensors(); ++j) {
      diam = std::max(diam,
                      weighted_distance(rec.position(i), rec.position(j), w));
    }
  }
  return diam;
}

inline double nearest_sensor_distance(const Recording& rec, int center,
                                      const Weights& w) {
  double nearest = std::numeric_limits<double>::infinity();
  const auto& c = rec.position(center);
  for (int j = 1; j <= rec.n_sensors(); ++j) {
    if (j == center) continue;
    nearest = std::min(nearest, weighted_distance(c, rec.position(j), w));
  }
  return nearest;
}

// Largest radius such that every non-center sensor strictly inside the ball
// clears the alignment threshold: the minimum distance over sensors failing
// it, or diameter + 1 when none fail. Returns nullopt when the nearest
// sensor already fails, i.e. no radius yields more than a singleton ball.
inline std::optional<double> radius_from_threshold(const Recording& rec,
                                                   int center,
                                                   const Interval& I,
                                                   const Weights& w,
                                                   double min_sigma) {
  const auto& c = rec.position(center);
  double nearest_fail = std::numeric_limits<double>::infinity();
  double nearest_any = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= rec.n_sensors(); ++k) {
    if (k == center) continue;
    const double d = weighted_distance(c, rec.position(k), w);
    nearest_any = std::min(nearest_any, d);
    const double sigma = alignment_pair(rec, center, k, I);
    if (!(sigma > min_sigma)) nearest_fail = std::min(nearest_fail, d);
  }
  if (nearest_fail == std::numeric_limits<double>::infinity())
    return recording_diameter(rec, w) + 1.0;
  if (nearest_fail <= nearest_any) return std::nullopt;
  return nearest_fail;
}

struct PatternEvaluation {
  ScoreVector scores;
  std::vector<int> ball;
};

// Scores a genotype: length t2 - t1, area |ball|, alignment the average of
// alignment_pair(center, j) over every ball member, center's self term
// included. One undefined pair makes the whole alignment undefined.
inline PatternEvaluation evaluate_pattern(const Recording& rec,
                                          const PatternGenotype& g) {
  PatternEvaluation ev;
  ev.ball = ball_members(rec, g.center, g.weights, g.radius);
  ev.scores.length = g.interval.length();
  ev.scores.area = static_cast<int>(ev.ball.size());
  double sum = 0.0;
  for (int j : ev.ball) {
    const double a = alignment_pair(rec, g.center, j, g.interval);
    if (!alignment_defined(a)) {
      ev.scores.alignment = kUndefinedAlignment;
      return ev;
    }
    sum += a;
  }
  ev.scores.alignment = sum / static_cast<double>(ev.ball.size());
  return ev;
}

inline ScoreVector score(const Recording& rec, const PatternGenotype& g) {
  return evaluate_pattern(rec, g).scores;
}

}  // namespace stpm
