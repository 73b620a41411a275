// Steady-state evolutionary miner: constrained initialization, admissibility
// gating, self-adaptive mutation, restricted-mating crossover, and archive
// guided selection/replacement. The loop itself is generic over a model so
// the paired-setting miner reuses it unchanged.
#pragma once

#include <array>
#include <cassert>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <future>
#include <thread>
#include <utility>
#include <vector>

#include "stpm/config.hpp"
#include "stpm/metrics.hpp"
#include "stpm/momoo.hpp"
#include "stpm/recording.hpp"
#include "stpm/rng.hpp"
#include "stpm/types.hpp"

namespace stpm {

struct ArchiveEntry {
  PatternGenotype genotype;
  ScoreVector scores;
  Support support;
};

template <class Entry>
struct Member {
  Entry entry;
  bool admissible = false;
};

struct RunStats {
  long long evaluations = 0;
  double wall_seconds = 0.0;
  std::uint64_t cell_touches = 0;
};

namespace detail {

constexpr double kMinPositiveGene = 1e-9;
constexpr double kMinStepSize = 1e-12;
constexpr double kMaxStepSize = 1e12;

inline std::array<double, 4> initial_step_sizes(const Weights& w, double r) {
  auto s = [](double v) { return 0.1 * std::abs(v) + 0.01; };
  return {s(w.w1), s(w.w2), s(w.w3), s(r)};
}

// Interval start uniform in [t1_floor, T-1] (a start at T leaves no room for
// t2); length Gaussian around min_len, rounded, clamped into the recording.
inline Interval draw_interval(int t1_floor, int n_steps, int min_len,
                              Rng& rng) {
  const int t1 = rng.uniform_int(t1_floor, n_steps - 1);
  const double raw =
      rng.gauss(static_cast<double>(min_len), min_len / 10.0);
  int len = static_cast<int>(std::llround(raw));
  len = std::max(len, 2);
  len = std::min(len, n_steps - t1);
  len = std::max(len, 1);
  return Interval{t1, t1 + len};
}

}  // namespace detail

// Constrained sampling of a fresh genotype: uniform center, Euclidean
// weights, interval from draw_interval, radius derived from the alignment
// threshold (falling back to the nearest-sensor distance when no radius can
// produce more than a singleton ball; such seeds die by the area gate).
inline PatternGenotype init_pattern(const MinerConfig& cfg,
                                    const Recording& rec, Rng& rng) {
  PatternGenotype g;
  g.center = rng.uniform_int(1, rec.n_sensors());
  g.weights = Weights{1.0, 1.0, 1.0};
  g.interval =
      detail::draw_interval(cfg.t1_floor, rec.n_steps(), cfg.min_len, rng);
  const auto r = radius_from_threshold(rec, g.center, g.interval, g.weights,
                                       cfg.min_sigma);
  g.radius = r ? *r : nearest_sensor_distance(rec, g.center, g.weights);
  g.step_sizes = detail::initial_step_sizes(g.weights, g.radius);
  return g;
}

inline bool is_admissible(const PatternGenotype& g, const ScoreVector& s,
                          const MinerConfig& cfg) {
  return s.area >= cfg.min_area && alignment_defined(s.alignment) &&
         g.interval.t1 >= cfg.t1_floor;
}

namespace detail {

inline void mutate_center_in_ball(PatternGenotype& g, const Recording& rec,
                                  Rng& rng) {
  const auto ball = ball_members(rec, g.center, g.weights, g.radius);
  g.center = ball[static_cast<std::size_t>(
      rng.uniform_int(0, static_cast<int>(ball.size()) - 1))];
}

// Log-normal step-size update followed by Gaussian perturbation of
// (w1, w2, w3, r); genes clamped positive.
inline void mutate_self_adaptive(PatternGenotype& g, Rng& rng) {
  const double tau = 1.0 / std::sqrt(2.0 * 4.0);
  double* genes[4] = {&g.weights.w1, &g.weights.w2, &g.weights.w3, &g.radius};
  for (int k = 0; k < 4; ++k) {
    auto& step = g.step_sizes[static_cast<std::size_t>(k)];
    step *= std::exp(tau * rng.gauss(0.0, 1.0));
    step = std::clamp(step, kMinStepSize, kMaxStepSize);
    *genes[k] += rng.gauss(0.0, step);
    *genes[k] = std::max(*genes[k], kMinPositiveGene);
  }
}

// Move one interval bound one step in one direction, all chosen uniformly;
// moves that would break t1_floor <= t1 < t2 <= T are clamped to no-ops.
inline void mutate_interval_bound(Interval& I, int t1_floor, int n_steps,
                                  Rng& rng) {
  const bool move_t1 = rng.coin();
  const int delta = rng.coin() ? 1 : -1;
  if (move_t1) {
    const int t1 = I.t1 + delta;
    if (t1 >= t1_floor && t1 < I.t2) I.t1 = t1;
  } else {
    const int t2 = I.t2 + delta;
    if (t2 > I.t1 && t2 <= n_steps) I.t2 = t2;
  }
}

}  // namespace detail

// One of four sub-operators, chosen uniformly: center re-draw inside the
// current ball, self-adaptive Gaussian mutation of (w, r), a one-step
// interval bound move, or a brand-new individual.
inline PatternGenotype mutate(const PatternGenotype& x, const Recording& rec,
                              const MinerConfig& cfg, Rng& rng) {
  PatternGenotype g = x;
  switch (rng.uniform_int(0, 3)) {
    case 0:
      detail::mutate_center_in_ball(g, rec, rng);
      break;
    case 1:
      detail::mutate_self_adaptive(g, rng);
      break;
    case 2:
      detail::mutate_interval_bound(g.interval, cfg.t1_floor, rec.n_steps(),
                                    rng);
      break;
    default:
      g = init_pattern(cfg, rec, rng);
      break;
  }
  return g;
}

// One of: take the mate's center, take the mate's ellipsoid (weights, radius,
// step sizes), or merge the two intervals. Caller must have checked mates_ok.
inline PatternGenotype crossover(const PatternGenotype& x,
                                 const PatternGenotype& y, Rng& rng) {
  PatternGenotype g = x;
  switch (rng.uniform_int(0, 2)) {
    case 0:
      g.center = y.center;
      break;
    case 1:
      g.weights = y.weights;
      g.radius = y.radius;
      g.step_sizes = y.step_sizes;
      break;
    default:
      g.interval = Interval{std::min(x.interval.t1, y.interval.t1),
                            std::max(x.interval.t2, y.interval.t2)};
      break;
  }
  return g;
}

// Restricted mating: one center must lie inside the other's ball and the
// intervals must share at least one step (the fast inclusion test, checked
// in both directions).
inline bool mates_ok(const PatternGenotype& x, const PatternGenotype& y,
                     const Recording& rec) {
  if (shared_steps(x.interval, y.interval) <= 0) return false;
  const double dxy = weighted_distance(rec.position(y.center),
                                       rec.position(x.center), y.weights);
  if (dxy < y.radius) return true;
  const double dyx = weighted_distance(rec.position(x.center),
                                       rec.position(y.center), x.weights);
  return dyx < x.radius;
}

namespace detail {

constexpr int kArchiveSampleSize = 20;

template <class Entry>
std::vector<const Entry*> sample_archive(const ParetoArchive<Entry>& arch,
                                         Rng& rng) {
  std::vector<const Entry*> out;
  const int n = static_cast<int>(arch.size());
  const auto idx = rng.sample_distinct(n, kArchiveSampleSize);
  out.reserve(idx.size());
  for (int i : idx) out.push_back(&arch.entries()[static_cast<std::size_t>(i)]);
  return out;
}

template <class Entry>
bool dominated_by_any(const Entry& e,
                      const std::vector<const Entry*>& sample, double p,
                      InclusionMode mode) {
  for (const Entry* s : sample) {
    if (pmo_dominates(*s, e, p, mode)) return true;
  }
  return false;
}

// Crowding distance of the two contestants relative to the archive sample.
template <class Entry>
std::pair<double, double> contestant_crowding(
    const Entry& a, const Entry& b, const std::vector<const Entry*>& sample) {
  std::vector<ScoreVector> scores;
  scores.reserve(sample.size() + 2);
  for (const Entry* s : sample) scores.push_back(s->scores);
  scores.push_back(a.scores);
  scores.push_back(b.scores);
  const auto cd = crowding_distances(scores);
  return {cd[cd.size() - 2], cd[cd.size() - 1]};
}

}  // namespace detail

// Binary tournament over admissible members, guided by a sampled archive
// subset: not being dominated by the sample wins, then larger crowding
// distance, then a fair coin.
template <class Entry>
std::size_t select_parent(const std::vector<Member<Entry>>& pop,
                          const ParetoArchive<Entry>& arch, Rng& rng) {
  std::vector<std::size_t> admissible;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    if (pop[i].admissible) admissible.push_back(i);
  }
  assert(!admissible.empty());
  const std::size_t a = admissible[static_cast<std::size_t>(
      rng.uniform_int(0, static_cast<int>(admissible.size()) - 1))];
  const std::size_t b = admissible[static_cast<std::size_t>(
      rng.uniform_int(0, static_cast<int>(admissible.size()) - 1))];
  if (a == b) return a;

  const auto sample = detail::sample_archive(arch, rng);
  const bool dom_a =
      detail::dominated_by_any(pop[a].entry, sample, arch.p(), arch.mode());
  const bool dom_b =
      detail::dominated_by_any(pop[b].entry, sample, arch.p(), arch.mode());
  if (dom_a != dom_b) return dom_a ? b : a;

  const auto [ca, cb] =
      detail::contestant_crowding(pop[a].entry, pop[b].entry, sample);
  if (ca > cb) return a;
  if (cb > ca) return b;
  return rng.coin() ? a : b;
}

// Replacement slot: a uniform non-admissible member if any exists, otherwise
// an inverse tournament (dominated first, then smaller crowding distance).
template <class Entry>
std::size_t select_replacement(const std::vector<Member<Entry>>& pop,
                               const ParetoArchive<Entry>& arch, Rng& rng) {
  std::vector<std::size_t> blocked;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    if (!pop[i].admissible) blocked.push_back(i);
  }
  if (!blocked.empty()) {
    return blocked[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<int>(blocked.size()) - 1))];
  }

  const std::size_t a = static_cast<std::size_t>(
      rng.uniform_int(0, static_cast<int>(pop.size()) - 1));
  const std::size_t b = static_cast<std::size_t>(
      rng.uniform_int(0, static_cast<int>(pop.size()) - 1));
  if (a == b) return a;

  const auto sample = detail::sample_archive(arch, rng);
  const bool dom_a =
      detail::dominated_by_any(pop[a].entry, sample, arch.p(), arch.mode());
  const bool dom_b =
      detail::dominated_by_any(pop[b].entry, sample, arch.p(), arch.mode());
  if (dom_a != dom_b) return dom_a ? a : b;

  const auto [ca, cb] =
      detail::contestant_crowding(pop[a].entry, pop[b].entry, sample);
  if (ca < cb) return a;
  if (cb < ca) return b;
  return rng.coin() ? a : b;
}

namespace detail {

// Index-order merge keeps runs with threads > 1 identical to sequential
// runs: drafting consumes the RNG up front and scoring is RNG-free.
template <class Model>
std::vector<typename Model::Entry> evaluate_all(
    const Model& model, const std::vector<typename Model::Genotype>& drafts,
    int threads) {
  using Entry = typename Model::Entry;
  std::vector<Entry> entries(drafts.size());
  const int n = static_cast<int>(drafts.size());
  const int workers = std::max(1, std::min(threads, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i)
      entries[static_cast<std::size_t>(i)] =
          model.evaluate(drafts[static_cast<std::size_t>(i)]);
    return entries;
  }
  std::vector<std::future<std::uint64_t>> futs;
  futs.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    const int lo = n * w / workers;
    const int hi = n * (w + 1) / workers;
    futs.push_back(std::async(std::launch::async, [&, lo, hi] {
      cell_touches = 0;
      for (int i = lo; i < hi; ++i)
        entries[static_cast<std::size_t>(i)] =
            model.evaluate(drafts[static_cast<std::size_t>(i)]);
      return cell_touches;
    }));
  }
  for (auto& f : futs) cell_touches += f.get();
  return entries;
}

}  // namespace detail

// The steady-state loop. Model supplies init/evaluate/admissible/mutate/
// crossover/mates_ok over its genotype and entry types; everything here is
// mode-independent. Deterministic for a given config seed.
template <class Model>
ParetoArchive<typename Model::Entry> steady_state_run(
    const Model& model, const MinerConfig& cfg, RunStats* stats = nullptr) {
  using Entry = typename Model::Entry;
  const auto t0 = std::chrono::steady_clock::now();
  const std::uint64_t touches0 = cell_touches;
  Rng rng(cfg.seed);

  ParetoArchive<Entry> archive(static_cast<std::size_t>(cfg.pop_size) * 10,
                               cfg.p, InclusionMode::fast);

  std::vector<typename Model::Genotype> drafts;
  drafts.reserve(static_cast<std::size_t>(cfg.pop_size));
  for (int i = 0; i < cfg.pop_size; ++i) drafts.push_back(model.init(rng));
  auto initial = detail::evaluate_all(model, drafts, cfg.threads);

  std::vector<Member<Entry>> pop;
  pop.reserve(initial.size());
  long long evaluations = static_cast<long long>(initial.size());
  bool any_admissible = false;
  for (auto& entry : initial) {
    const bool adm = model.admissible(entry);
    if (adm) archive.insert(entry);
    any_admissible = any_admissible || adm;
    pop.push_back(Member<Entry>{std::move(entry), adm});
  }

  while (evaluations < cfg.eval_budget) {
    typename Model::Genotype child;
    if (!any_admissible) {
      child = model.init(rng);
    } else {
      const std::size_t pi = select_parent(pop, archive, rng);
      assert(pop[pi].admissible);
      const auto& parent = pop[pi].entry.genotype;
      if (rng.uniform_real() < cfg.mutation_rate) {
        child = model.mutate(parent, rng);
      } else {
        int mate = -1;
        for (int probe = 0; probe < cfg.pop_size; ++probe) {
          const int m = rng.uniform_int(0, cfg.pop_size - 1);
          if (static_cast<std::size_t>(m) == pi) continue;
          if (!pop[static_cast<std::size_t>(m)].admissible) continue;
          if (model.mates_ok(parent,
                             pop[static_cast<std::size_t>(m)].entry.genotype)) {
            mate = m;
            break;
          }
        }
        if (mate >= 0) {
          assert(pop[static_cast<std::size_t>(mate)].admissible);
          child = model.crossover(
              parent, pop[static_cast<std::size_t>(mate)].entry.genotype, rng);
        } else {
          child = model.mutate(parent, rng);
        }
      }
    }

    Entry entry = model.evaluate(child);
    ++evaluations;
    const bool adm = model.admissible(entry);
    if (adm) archive.insert(entry);
    const std::size_t slot = select_replacement(pop, archive, rng);
    pop[slot] = Member<Entry>{std::move(entry), adm};
    any_admissible = false;
    for (const auto& m : pop) any_admissible = any_admissible || m.admissible;
  }

  if (stats) {
    stats->evaluations = evaluations;
    stats->wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    stats->cell_touches = cell_touches - touches0;
  }
  return archive;
}

// Single-recording model.
class StandardMiner {
 public:
  using Genotype = PatternGenotype;
  using Entry = ArchiveEntry;

  StandardMiner(const Recording& rec, const MinerConfig& cfg)
      : rec_(rec), cfg_(cfg) {}

  Genotype init(Rng& rng) const { return init_pattern(cfg_, rec_, rng); }

  Entry evaluate(const Genotype& g) const {
    auto ev = evaluate_pattern(rec_, g);
    return Entry{g, ev.scores,
                 Support{g.center, std::move(ev.ball), g.interval}};
  }

  bool admissible(const Entry& e) const {
    return is_admissible(e.genotype, e.scores, cfg_);
  }

  Genotype mutate(const Genotype& g, Rng& rng) const {
    return stpm::mutate(g, rec_, cfg_, rng);
  }

  Genotype crossover(const Genotype& x, const Genotype& y, Rng& rng) const {
    return stpm::crossover(x, y, rng);
  }

  bool mates_ok(const Genotype& x, const Genotype& y) const {
    return stpm::mates_ok(x, y, rec_);
  }

 private:
  const Recording& rec_;
  MinerConfig cfg_;
};

inline ParetoArchive<ArchiveEntry> run(const MinerConfig& cfg,
                                       const Recording& rec,
                                       RunStats* stats = nullptr) {
  validate_for(cfg, rec.n_steps());
  StandardMiner model(rec, cfg);
  return steady_state_run(model, cfg, stats);
}

}  // namespace stpm
