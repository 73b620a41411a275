// Paired-setting extension: genotype carrying a mutual-nearest sensor pair,
// per-setting area/alignment, the activity-difference feature, and the two
// extra admissibility constraints (|d| threshold and late interval onset).
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "stpm/config.hpp"
#include "stpm/engine.hpp"
#include "stpm/errors.hpp"
#include "stpm/metrics.hpp"
#include "stpm/momoo.hpp"
#include "stpm/recording.hpp"
#include "stpm/rng.hpp"
#include "stpm/types.hpp"

namespace stpm {

struct PairedRecording {
  Recording positive;
  Recording negative;

  PairedRecording(Recording pos, Recording neg)
      : positive(std::move(pos)), negative(std::move(neg)) {
    if (positive.n_sensors() != negative.n_sensors())
      throw DimensionError("paired recordings must have equal sensor counts");
  }

  int n_sensors() const { return positive.n_sensors(); }
  // Intervals are validated against the shorter setting.
  int usable_steps() const {
    return std::min(positive.n_steps(), negative.n_steps());
  }
};

struct DiscriminantGenotype {
  int center_pos = 1;  // center sensor in the positive setting
  int center_neg = 1;  // its mutual-nearest counterpart in the negative one
  Weights weights;
  Interval interval;
  double radius = 1.0;
  std::array<double, 4> step_sizes{0.11, 0.11, 0.11, 0.11};
};

struct DiscriminantScores {
  int length = 0;
  int area_pos = 0;
  int area_neg = 0;
  double align_pos = kUndefinedAlignment;
  double align_neg = kUndefinedAlignment;
  double activity_diff = 0.0;  // mean activity over ball+ x I minus ball- x I
};

struct DiscriminantEntry {
  DiscriminantGenotype genotype;
  DiscriminantScores detail;
  ScoreVector scores;  // (length, min area, min alignment) unless the
                       // |sigma+ - sigma-| objective is enabled
  Support support;     // positive-setting ball x interval
};

// Nearest negative-setting sensor to positive sensor i, accepted only when
// the relation is mutual: i must also be the nearest positive sensor to that
// candidate. Distance ties break toward the smallest index.
inline std::optional<std::pair<int, int>> pair_centers(
    const PairedRecording& pr, int i, const Weights& w) {
  auto nearest = [&](const Recording& from, int idx, const Recording& to) {
    int best = 1;
    double best_d = weighted_distance(from.position(idx), to.position(1), w);
    for (int k = 2; k <= to.n_sensors(); ++k) {
      const double d = weighted_distance(from.position(idx), to.position(k), w);
      if (d < best_d) {
        best_d = d;
        best = k;
      }
    }
    return best;
  };
  const int j = nearest(pr.positive, i, pr.negative);
  const int back = nearest(pr.negative, j, pr.positive);
  if (back != i) return std::nullopt;
  return std::make_pair(i, j);
}

inline DiscriminantScores discriminant_score(const PairedRecording& pr,
                                             const DiscriminantGenotype& g) {
  DiscriminantScores s;
  s.length = g.interval.length();

  auto side = [&](const Recording& rec, int center, int& area, double& align) {
    const auto ball = ball_members(rec, center, g.weights, g.radius);
    area = static_cast<int>(ball.size());
    double sum = 0.0;
    align = 0.0;
    double cells = 0.0;
    for (int j : ball) {
      const double a = alignment_pair(rec, center, j, g.interval);
      if (!alignment_defined(a)) align = kUndefinedAlignment;
      if (alignment_defined(align)) align += a / static_cast<double>(ball.size());
      for (int t = g.interval.t1; t <= g.interval.t2; ++t)
        sum += rec.activity(j, t);
      cells += g.interval.steps();
    }
    cell_touches += static_cast<std::uint64_t>(cells);
    return sum / cells;
  };

  const double mean_pos =
      side(pr.positive, g.center_pos, s.area_pos, s.align_pos);
  const double mean_neg =
      side(pr.negative, g.center_neg, s.area_neg, s.align_neg);
  s.activity_diff = mean_pos - mean_neg;
  return s;
}

inline bool is_admissible_disc(const DiscriminantGenotype& g,
                               const DiscriminantScores& s,
                               const MinerConfig& cfg) {
  return std::min(s.area_pos, s.area_neg) >= cfg.min_area &&
         alignment_defined(s.align_pos) && alignment_defined(s.align_neg) &&
         std::abs(s.activity_diff) > cfg.min_d.value_or(0.0) &&
         g.interval.t1 >= cfg.t1_floor;
}

namespace detail {

inline ScoreVector project_scores(const DiscriminantScores& s,
                                  bool sigma_diff_objective) {
  double align;
  if (sigma_diff_objective) {
    align = (alignment_defined(s.align_pos) && alignment_defined(s.align_neg))
                ? std::abs(s.align_pos - s.align_neg)
                : kUndefinedAlignment;
  } else {
    align = std::min(s.align_pos, s.align_neg);
  }
  return ScoreVector{s.length, std::min(s.area_pos, s.area_neg), align};
}

}  // namespace detail

// Paired-setting model for the steady-state loop. The pairing is re-resolved
// whenever a center or the weights change; when the new configuration has no
// mutual-nearest pair the operator leaves the parent unchanged.
class DiscriminantMiner {
 public:
  using Genotype = DiscriminantGenotype;
  using Entry = DiscriminantEntry;

  DiscriminantMiner(const PairedRecording& pr, const MinerConfig& cfg)
      : pr_(pr), cfg_(cfg) {}

  Genotype init(Rng& rng) const {
    const int n = pr_.n_sensors();
    for (int attempt = 0; attempt < n; ++attempt) {
      const int i = rng.uniform_int(1, n);
      const auto pair = pair_centers(pr_, i, Weights{1.0, 1.0, 1.0});
      if (!pair) continue;
      Genotype g;
      g.center_pos = pair->first;
      g.center_neg = pair->second;
      g.weights = Weights{1.0, 1.0, 1.0};
      g.interval = detail::draw_interval(cfg_.t1_floor, pr_.usable_steps(),
                                         cfg_.min_len, rng);
      const auto r = radius_from_threshold(pr_.positive, g.center_pos,
                                           g.interval, g.weights,
                                           cfg_.min_sigma);
      g.radius = r ? *r
                   : nearest_sensor_distance(pr_.positive, g.center_pos,
                                             g.weights);
      g.step_sizes = detail::initial_step_sizes(g.weights, g.radius);
      return g;
    }
    throw DataError(
        "no mutual-nearest sensor pair found; sensor geometry is degenerate");
  }

  Entry evaluate(const Genotype& g) const {
    auto detail_scores = discriminant_score(pr_, g);
    auto ball = ball_members(pr_.positive, g.center_pos, g.weights, g.radius);
    return Entry{
        g, detail_scores,
        detail::project_scores(detail_scores, cfg_.sigma_diff_objective),
        Support{g.center_pos, std::move(ball), g.interval}};
  }

  bool admissible(const Entry& e) const {
    return is_admissible_disc(e.genotype, e.detail, cfg_);
  }

  Genotype mutate(const Genotype& g, Rng& rng) const {
    Genotype out = g;
    switch (rng.uniform_int(0, 3)) {
      case 0: {
        const auto ball =
            ball_members(pr_.positive, g.center_pos, g.weights, g.radius);
        const int i = ball[static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<int>(ball.size()) - 1))];
        if (!repair_pairing(out, i)) return g;
        break;
      }
      case 1: {
        PatternGenotype tmp{g.center_pos, g.weights, g.interval, g.radius,
                            g.step_sizes};
        detail::mutate_self_adaptive(tmp, rng);
        out.weights = tmp.weights;
        out.radius = tmp.radius;
        out.step_sizes = tmp.step_sizes;
        if (!repair_pairing(out, out.center_pos)) return g;
        break;
      }
      case 2:
        detail::mutate_interval_bound(out.interval, cfg_.t1_floor,
                                      pr_.usable_steps(), rng);
        break;
      default:
        out = init(rng);
        break;
    }
    return out;
  }

  Genotype crossover(const Genotype& x, const Genotype& y, Rng& rng) const {
    Genotype out = x;
    switch (rng.uniform_int(0, 2)) {
      case 0:
        if (!repair_pairing(out, y.center_pos)) return x;
        break;
      case 1:
        out.weights = y.weights;
        out.radius = y.radius;
        out.step_sizes = y.step_sizes;
        if (!repair_pairing(out, out.center_pos)) return x;
        break;
      default:
        out.interval = Interval{std::min(x.interval.t1, y.interval.t1),
                                std::max(x.interval.t2, y.interval.t2)};
        break;
    }
    return out;
  }

  bool mates_ok(const Genotype& x, const Genotype& y) const {
    if (shared_steps(x.interval, y.interval) <= 0) return false;
    const auto& rec = pr_.positive;
    const double dxy = weighted_distance(rec.position(y.center_pos),
                                         rec.position(x.center_pos), y.weights);
    if (dxy < y.radius) return true;
    const double dyx = weighted_distance(rec.position(x.center_pos),
                                         rec.position(y.center_pos), x.weights);
    return dyx < x.radius;
  }

 private:
  // Re-resolve the mutual-nearest pairing for positive center i under the
  // genotype's current weights; false when no mutual pair exists there.
  bool repair_pairing(Genotype& g, int i) const {
    const auto pair = pair_centers(pr_, i, g.weights);
    if (!pair) return false;
    g.center_pos = pair->first;
    g.center_neg = pair->second;
    return true;
  }

  const PairedRecording& pr_;
  MinerConfig cfg_;
};

inline ParetoArchive<DiscriminantEntry> run_discriminant(
    const MinerConfig& cfg, const PairedRecording& pr,
    RunStats* stats = nullptr) {
  validate_for(cfg, pr.usable_steps());
  if (!cfg.min_d)
    throw ConfigError("paired mining requires min_d to be set");
  DiscriminantMiner model(pr, cfg);
  return steady_state_run(model, cfg, stats);
}

}  // namespace stpm
