// Synthetic recording generator with planted ground-truth patterns.
//
// Sensors sit on a unit-spaced line, so a consecutive id range is exactly a
// Euclidean ball and planted sensor sets are recoverable as ellipsoid regions.
// Every planted pattern carries one shared smooth waveform; generation is a
// pure function of the spec (seed included).
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stpm/errors.hpp"
#include "stpm/recording.hpp"
#include "stpm/rng.hpp"
#include "stpm/types.hpp"

namespace stpm {

struct PlantedPattern {
  std::vector<int> sensor_ids;   // 1-based, non-empty
  Interval interval;             // within [1, n_steps]
  double base_amplitude = 1.0;
  double noise_sigma = 0.0;      // per-cell noise inside the pattern
  double mean_shift = 0.0;       // constant added on pattern cells only;
                                 // lets paired fixtures differ by a known offset
};

struct SynthSpec {
  int n_sensors = 2;
  int n_steps = 2;
  std::vector<PlantedPattern> planted;
  double background_sigma = 1.0;
  std::optional<double> mean_offset;  // default: 10 * background_sigma
  std::uint64_t seed = 1;

  double resolved_mean_offset() const {
    return mean_offset ? *mean_offset : 10.0 * background_sigma;
  }
};

struct SynthResult {
  Recording recording;
  std::vector<PlantedPattern> truth;  // the spec's planted list, unchanged
};

inline void validate(const SynthSpec& spec) {
  if (spec.n_sensors < 2) throw SpecError("n_sensors must be >= 2");
  if (spec.n_steps < 2) throw SpecError("n_steps must be >= 2");
  if (!(spec.background_sigma > 0.0))
    throw SpecError("background_sigma must be > 0");
  if (!std::isfinite(spec.resolved_mean_offset()))
    throw SpecError("mean_offset must be finite");

  // (sensor -> intervals) map for the overlap check.
  std::map<int, std::vector<Interval>> cells;
  for (const auto& p : spec.planted) {
    if (p.sensor_ids.empty()) throw SpecError("planted sensor_ids empty");
    if (!(p.interval.t1 >= 1 && p.interval.t1 < p.interval.t2 &&
          p.interval.t2 <= spec.n_steps))
      throw SpecError("planted interval outside [1, n_steps]");
    if (!std::isfinite(p.base_amplitude) || !std::isfinite(p.mean_shift) ||
        !(p.noise_sigma >= 0.0))
      throw SpecError("planted pattern has invalid amplitude/noise");
    for (int s : p.sensor_ids) {
      if (s < 1 || s > spec.n_sensors)
        throw SpecError("planted sensor id outside [1, n_sensors]");
      for (const auto& other : cells[s]) {
        if (shared_steps(p.interval, other) > 0)
          throw SpecError("planted patterns overlap on sensor " +
                          std::to_string(s));
      }
      cells[s].push_back(p.interval);
    }
  }
}

namespace detail {

// Cumulative sum of unit Gaussian steps, rescaled to unit peak amplitude.
inline std::vector<double> smooth_waveform(int steps, Rng& rng) {
  std::vector<double> s(static_cast<std::size_t>(steps));
  double acc = 0.0;
  double peak = 0.0;
  for (auto& v : s) {
    acc += rng.gauss(0.0, 1.0);
    v = acc;
    peak = std::max(peak, std::abs(acc));
  }
  if (peak > 0.0) {
    for (auto& v : s) v /= peak;
  }
  return s;
}

}  // namespace detail

inline SynthResult generate_synthetic(const SynthSpec& spec) {
  validate(spec);
  Rng rng(spec.seed);
  const double offset = spec.resolved_mean_offset();

  std::vector<SensorPosition> positions(static_cast<std::size_t>(spec.n_sensors));
  for (int i = 0; i < spec.n_sensors; ++i)
    positions[static_cast<std::size_t>(i)] = {static_cast<double>(i + 1), 0.0, 0.0};

  std::vector<double> activities(
      static_cast<std::size_t>(spec.n_sensors) * spec.n_steps);
  for (auto& v : activities) v = offset + rng.gauss(0.0, spec.background_sigma);

  for (const auto& p : spec.planted) {
    auto wave = detail::smooth_waveform(p.interval.steps(), rng);
    std::vector<int> members = p.sensor_ids;
    std::sort(members.begin(), members.end());
    for (int s : members) {
      for (int t = p.interval.t1; t <= p.interval.t2; ++t) {
        auto idx = static_cast<std::size_t>(s - 1) * spec.n_steps + (t - 1);
        activities[idx] = offset + p.mean_shift +
                          p.base_amplitude *
                              wave[static_cast<std::size_t>(t - p.interval.t1)] +
                          rng.gauss(0.0, p.noise_sigma);
      }
    }
  }

  return SynthResult{
      Recording(std::move(positions), std::move(activities), spec.n_steps,
                "synthetic"),
      spec.planted};
}

}  // namespace stpm
