// Brute-force miner over a discretized (center, radius, interval) grid.
// Intended for desk-size instances only, as ground truth for the
// evolutionary search; Euclidean weights are fixed.
#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "stpm/config.hpp"
#include "stpm/engine.hpp"
#include "stpm/errors.hpp"
#include "stpm/metrics.hpp"
#include "stpm/momoo.hpp"

namespace stpm {

struct GridSpec {
  // Empty means "all inter-sensor distances plus one beyond the diameter",
  // which enumerates every distinct Euclidean ball at every center.
  std::vector<double> radius_levels;
  int t_stride = 1;
  std::vector<int> len_levels;  // interval lengths (t2 - t1)
};

namespace detail {

inline std::vector<double> auto_radius_levels(const Recording& rec) {
  const Weights w{1.0, 1.0, 1.0};
  std::vector<double> levels;
  for (int i = 1; i <= rec.n_sensors(); ++i) {
    for (int j = i + 1; j <= rec.n_sensors(); ++j) {
      levels.push_back(
          weighted_distance(rec.position(i), rec.position(j), w));
    }
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  levels.push_back(levels.back() + 1.0);
  // Distance zero cannot be a ball radius.
  while (!levels.empty() && !(levels.front() > 0.0))
    levels.erase(levels.begin());
  return levels;
}

}  // namespace detail

// Every (center, radius level, strided t1, length level) cell with Euclidean
// weights, scored and filtered by admissibility. Per center, radius levels
// that produce the same ball are collapsed.
inline std::vector<ArchiveEntry> enumerate_candidates(const Recording& rec,
                                                      const GridSpec& grid,
                                                      const MinerConfig& cfg) {
  if (grid.t_stride < 1) throw ConfigError("t_stride must be >= 1");
  if (grid.t_stride > rec.n_steps())
    throw ConfigError("t_stride exceeds the recording length");
  if (grid.len_levels.empty()) throw ConfigError("len_levels must not be empty");
  for (int len : grid.len_levels) {
    if (len < 1) throw ConfigError("len_levels entries must be >= 1");
  }
  auto radii = grid.radius_levels.empty() ? detail::auto_radius_levels(rec)
                                          : grid.radius_levels;
  std::sort(radii.begin(), radii.end());
  for (double r : radii) {
    if (!(r > 0.0)) throw ConfigError("radius levels must be > 0");
  }

  long long starts = 0;
  for (int t1 = 1; t1 <= rec.n_steps() - 1; t1 += grid.t_stride) ++starts;
  const long long cells = static_cast<long long>(rec.n_sensors()) *
                          static_cast<long long>(radii.size()) * starts *
                          static_cast<long long>(grid.len_levels.size());
  if (cells > 10'000'000)
    throw SizeError("grid has " + std::to_string(cells) +
                    " cells (limit 10^7); coarsen the stride or levels");

  const Weights w{1.0, 1.0, 1.0};
  std::vector<ArchiveEntry> out;
  for (int center = 1; center <= rec.n_sensors(); ++center) {
    int last_area = -1;
    for (double r : radii) {
      auto ball = ball_members(rec, center, w, r);
      if (static_cast<int>(ball.size()) == last_area) continue;  // same ball
      last_area = static_cast<int>(ball.size());
      for (int t1 = 1; t1 <= rec.n_steps() - 1; t1 += grid.t_stride) {
        for (int len : grid.len_levels) {
          const int t2 = t1 + len;
          if (t2 > rec.n_steps()) continue;
          PatternGenotype g;
          g.center = center;
          g.weights = w;
          g.interval = Interval{t1, t2};
          g.radius = r;
          g.step_sizes = detail::initial_step_sizes(w, r);

          ScoreVector s;
          s.length = len;
          s.area = static_cast<int>(ball.size());
          double sum = 0.0;
          bool defined = true;
          for (int j : ball) {
            const double a = alignment_pair(rec, center, j, g.interval);
            if (!alignment_defined(a)) {
              defined = false;
              break;
            }
            sum += a;
          }
          s.alignment = defined ? sum / static_cast<double>(ball.size())
                                : kUndefinedAlignment;
          if (!is_admissible(g, s, cfg)) continue;
          out.push_back(ArchiveEntry{g, s, Support{center, ball, g.interval}});
        }
      }
    }
  }
  return out;
}

// Exhaustive O(n^2) filter: keep every candidate not dominated by any other,
// using the exact inclusion measure. Output order follows the input.
inline std::vector<ArchiveEntry> oracle_front(
    const std::vector<ArchiveEntry>& candidates, double p) {
  std::vector<ArchiveEntry> front;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < candidates.size() && !dominated; ++j) {
      if (j == i) continue;
      dominated =
          pmo_dominates(candidates[j], candidates[i], p, InclusionMode::exact);
    }
    if (!dominated) front.push_back(candidates[i]);
  }
  return front;
}

}  // namespace stpm
