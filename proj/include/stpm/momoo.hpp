// Multi-modal multi-objective dominance: Pareto domination, p-inclusion of
// supports (exact measure and the fast center-overlap approximation), their
// composition, and the bounded archive of mutually non-dominated patterns.
#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <vector>

#include "stpm/types.hpp"

namespace stpm {

// Spatio-temporal support of a pattern: its sensor set (sorted) and time
// interval, plus the generating center used by the fast inclusion test.
struct Support {
  int center = 0;
  std::vector<int> sensors;
  Interval interval;
};

// Counting measure on (sensor, time) cells, with intervals measured by
// length (t2 - t1).
inline long long support_measure(const Support& s) {
  return static_cast<long long>(s.sensors.size()) * s.interval.length();
}

inline long long support_intersection_measure(const Support& a,
                                              const Support& b) {
  std::size_t ia = 0, ib = 0, common = 0;
  while (ia < a.sensors.size() && ib < b.sensors.size()) {
    if (a.sensors[ia] < b.sensors[ib]) {
      ++ia;
    } else if (a.sensors[ia] > b.sensors[ib]) {
      ++ib;
    } else {
      ++common;
      ++ia;
      ++ib;
    }
  }
  return static_cast<long long>(common) * overlap_length(a.interval, b.interval);
}

// True iff a improves on b in every criterion and strictly in at least one.
// The undefined alignment sentinel sorts below every real, so an undefined
// score never dominates and is weakly dominated on that coordinate.
inline bool pareto_dominates(const ScoreVector& a, const ScoreVector& b) {
  if (a.length < b.length || a.area < b.area || !(a.alignment >= b.alignment))
    return false;
  return a.length > b.length || a.area > b.area || a.alignment > b.alignment;
}

// |A intersect B| > p * |A|, strict.
inline bool p_included_exact(const Support& a, const Support& b, double p) {
  return static_cast<double>(support_intersection_measure(a, b)) >
         p * static_cast<double>(support_measure(a));
}

// Fast approximation: a's center lies in b's sensor set and the intervals
// share at least one time step. Ignores p by construction.
inline bool p_included_fast(const Support& a, const Support& b) {
  return std::binary_search(b.sensors.begin(), b.sensors.end(), a.center) &&
         shared_steps(a.interval, b.interval) > 0;
}

enum class InclusionMode { exact, fast };

inline bool p_included(const Support& a, const Support& b, double p,
                       InclusionMode mode) {
  return mode == InclusionMode::exact ? p_included_exact(a, b, p)
                                      : p_included_fast(a, b);
}

// x dominates y iff y's support is p-included in x's and x Pareto-dominates
// y's scores. Irreflexive and asymmetric; NOT transitive in general, because
// p-inclusion is not.
template <class Entry>
bool pmo_dominates(const Entry& x, const Entry& y, double p,
                   InclusionMode mode) {
  return p_included(y.support, x.support, p, mode) &&
         pareto_dominates(x.scores, y.scores);
}

// Standard crowding distance over the three objectives; extreme entries per
// objective get +infinity. Entries with undefined alignment participate as
// the lowest alignment values.
inline std::vector<double> crowding_distances(
    const std::vector<ScoreVector>& scores) {
  const std::size_t n = scores.size();
  std::vector<double> dist(n, 0.0);
  if (n <= 2) {
    std::fill(dist.begin(), dist.end(),
              std::numeric_limits<double>::infinity());
    return dist;
  }
  auto accumulate = [&](auto key) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return key(scores[a]) < key(scores[b]);
    });
    const double lo = key(scores[idx.front()]);
    const double hi = key(scores[idx.back()]);
    const double range = hi - lo;
    if (!(range > 0.0) || !std::isfinite(range)) return;
    dist[idx.front()] = std::numeric_limits<double>::infinity();
    dist[idx.back()] = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k + 1 < n; ++k) {
      const double gap =
          key(scores[idx[k + 1]]) - key(scores[idx[k - 1]]);
      dist[idx[k]] += gap / range;
    }
  };
  accumulate([](const ScoreVector& s) { return static_cast<double>(s.length); });
  accumulate([](const ScoreVector& s) { return static_cast<double>(s.area); });
  accumulate([](const ScoreVector& s) {
    return alignment_defined(s.alignment)
               ? s.alignment
               : -std::numeric_limits<double>::max();
  });
  return dist;
}

enum class InsertResult { inserted, rejected };

// Bounded archive of mutually non-dominated entries. A candidate is rejected
// iff an existing entry dominates it; otherwise it enters and every entry it
// dominates is dropped. On overflow the entry with the most p-overlapping
// neighbors is evicted, ties resolved by smallest crowding distance.
// Single-writer: concurrent scoring is fine, insertions are not.
template <class Entry>
class ParetoArchive {
 public:
  ParetoArchive(std::size_t capacity, double p, InclusionMode mode)
      : capacity_(capacity), p_(p), mode_(mode) {}

  InsertResult insert(Entry e) {
    for (const auto& existing : entries_) {
      if (pmo_dominates(existing, e, p_, mode_)) return InsertResult::rejected;
    }

    // Drop everything the newcomer dominates, keeping neighbor counts exact.
    for (std::size_t i = entries_.size(); i-- > 0;) {
      if (pmo_dominates(e, entries_[i], p_, mode_)) remove_at(i);
    }

    int count = 0;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (overlaps(e, entries_[i])) {
        ++neighbor_counts_[i];
        ++count;
      }
    }
    entries_.push_back(std::move(e));
    neighbor_counts_.push_back(count);

    if (entries_.size() > capacity_) evict_most_crowded();
    return InsertResult::inserted;
  }

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return capacity_; }
  double p() const { return p_; }
  InclusionMode mode() const { return mode_; }

 private:
  bool overlaps(const Entry& a, const Entry& b) const {
    return p_included(a.support, b.support, p_, mode_) ||
           p_included(b.support, a.support, p_, mode_);
  }

  void remove_at(std::size_t victim) {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (i != victim && overlaps(entries_[victim], entries_[i]))
        --neighbor_counts_[i];
    }
    entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(victim));
    neighbor_counts_.erase(neighbor_counts_.begin() +
                           static_cast<std::ptrdiff_t>(victim));
  }

  void evict_most_crowded() {
    const int max_count =
        *std::max_element(neighbor_counts_.begin(), neighbor_counts_.end());
    std::vector<std::size_t> tied;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (neighbor_counts_[i] == max_count) tied.push_back(i);
    }
    std::size_t victim = tied.front();
    if (tied.size() > 1) {
      std::vector<ScoreVector> scores(entries_.size());
      for (std::size_t i = 0; i < entries_.size(); ++i)
        scores[i] = entries_[i].scores;
      const auto cd = crowding_distances(scores);
      for (std::size_t i : tied) {
        if (cd[i] < cd[victim]) victim = i;
      }
    }
    remove_at(victim);
  }

  std::size_t capacity_;
  double p_;
  InclusionMode mode_;
  std::vector<Entry> entries_;
  std::vector<int> neighbor_counts_;
};

}  // namespace stpm
