// Shared test utilities: recording builders and independent straight-line
// re-implementations of the scoring formulas used as oracles. These must not
// share code paths with the library implementations they check.
#pragma once

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "stpm/recording.hpp"
#include "stpm/types.hpp"

namespace testutil {

// Recording from explicit rows (one per sensor), sensors on a unit line.
inline stpm::Recording make_recording(
    const std::vector<std::vector<double>>& rows) {
  std::vector<stpm::SensorPosition> pos;
  std::vector<double> act;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    pos.push_back({static_cast<double>(i + 1), 0.0, 0.0});
    for (double v : rows[i]) act.push_back(v);
  }
  return stpm::Recording(std::move(pos), std::move(act),
                         static_cast<int>(rows[0].size()), "test");
}

// Recording with explicit positions.
inline stpm::Recording make_recording(
    std::vector<stpm::SensorPosition> pos,
    const std::vector<std::vector<double>>& rows) {
  std::vector<double> act;
  for (const auto& r : rows)
    for (double v : r) act.push_back(v);
  return stpm::Recording(std::move(pos), std::move(act),
                         static_cast<int>(rows[0].size()), "test");
}

inline stpm::Recording random_recording(int n, int t, unsigned seed,
                                        double mean = 0.0,
                                        double sigma = 1.0) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> dist(mean, sigma);
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(n));
  for (auto& r : rows) {
    r.resize(static_cast<std::size_t>(t));
    for (auto& v : r) v = dist(gen);
  }
  return make_recording(rows);
}

constexpr double kUndefined = -std::numeric_limits<double>::infinity();

// Straight-line alignment: separate passes, separate square roots.
inline double naive_alignment(const stpm::Recording& rec, int i, int j,
                              const stpm::Interval& I) {
  const int n = I.t2 - I.t1 + 1;
  double dot = 0.0;
  for (int t = I.t1; t <= I.t2; ++t) dot += rec.activity(i, t) * rec.activity(j, t);
  double ei = 0.0;
  for (int t = I.t1; t <= I.t2; ++t) ei += rec.activity(i, t) * rec.activity(i, t);
  double ej = 0.0;
  for (int t = I.t1; t <= I.t2; ++t) ej += rec.activity(j, t) * rec.activity(j, t);
  if (ei == 0.0 || ej == 0.0) return kUndefined;
  double sum_i = 0.0;
  for (int t = I.t1; t <= I.t2; ++t) sum_i += rec.activity(i, t);
  double sum_j = 0.0;
  for (int t = I.t1; t <= I.t2; ++t) sum_j += rec.activity(j, t);
  const double mean_i = sum_i / n;
  const double mean_j = sum_j / n;
  if (mean_i == 0.0) return kUndefined;
  const double cosine = dot / (std::sqrt(ei) * std::sqrt(ej));
  const double factor = 1.0 - std::fabs(mean_i - mean_j) / std::fabs(mean_i);
  return cosine * factor;
}

inline double naive_weighted_distance(const stpm::SensorPosition& a,
                                      const stpm::SensorPosition& b,
                                      const stpm::Weights& w) {
  return std::sqrt(w.w1 * (a.x - b.x) * (a.x - b.x) +
                   w.w2 * (a.y - b.y) * (a.y - b.y) +
                   w.w3 * (a.z - b.z) * (a.z - b.z));
}

inline std::vector<int> naive_ball(const stpm::Recording& rec, int center,
                                   const stpm::Weights& w, double r) {
  std::vector<int> out;
  for (int j = 1; j <= rec.n_sensors(); ++j) {
    if (naive_weighted_distance(rec.position(center), rec.position(j), w) < r)
      out.push_back(j);
  }
  return out;
}

struct NaiveScore {
  int length = 0;
  int area = 0;
  double alignment = kUndefined;
};

inline NaiveScore naive_score(const stpm::Recording& rec,
                              const stpm::PatternGenotype& g) {
  NaiveScore s;
  s.length = g.interval.t2 - g.interval.t1;
  const auto ball = naive_ball(rec, g.center, g.weights, g.radius);
  s.area = static_cast<int>(ball.size());
  double sum = 0.0;
  for (int j : ball) {
    const double a = naive_alignment(rec, g.center, j, g.interval);
    if (a == kUndefined) return s;
    sum += a;
  }
  s.alignment = sum / static_cast<double>(ball.size());
  return s;
}

inline bool close_rel(double a, double b, double tol) {
  if (a == b) return true;
  const double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
  return std::fabs(a - b) <= tol * scale;
}

}  // namespace testutil
