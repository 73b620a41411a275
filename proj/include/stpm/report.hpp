// Post-run analysis: ground-truth recovery metrics, domination audits
// against oracle output, and plain-text / CSV summaries.
#pragma once

#include <algorithm>
#include <iomanip>
#include <optional>
#include <ostream>
#include <vector>

#include "stpm/io.hpp"
#include "stpm/momoo.hpp"
#include "stpm/synthetic.hpp"
#include "stpm/types.hpp"

namespace stpm {

inline double jaccard(std::vector<int> a, std::vector<int> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t ia = 0, ib = 0, common = 0;
  while (ia < a.size() && ib < b.size()) {
    if (a[ia] < b[ib]) {
      ++ia;
    } else if (a[ia] > b[ib]) {
      ++ib;
    } else {
      ++common;
      ++ia;
      ++ib;
    }
  }
  const std::size_t uni = a.size() + b.size() - common;
  return uni == 0 ? 0.0
                  : static_cast<double>(common) / static_cast<double>(uni);
}

// Shared time steps relative to the reference interval's step count.
inline double interval_overlap_ratio(const Interval& found,
                                     const Interval& reference) {
  return static_cast<double>(shared_steps(found, reference)) /
         static_cast<double>(reference.steps());
}

struct TruthMatch {
  std::size_t planted_index = 0;
  double best_jaccard = 0.0;
  double overlap_of_best = 0.0;
  bool recovered = false;  // some entry clears both thresholds at once
};

inline std::vector<TruthMatch> match_ground_truth(
    const std::vector<ReportEntry>& entries,
    const std::vector<PlantedPattern>& planted, double min_jaccard = 0.5,
    double min_overlap = 0.5) {
  std::vector<TruthMatch> out;
  for (std::size_t pi = 0; pi < planted.size(); ++pi) {
    TruthMatch m;
    m.planted_index = pi;
    for (const auto& e : entries) {
      const double jac = jaccard(e.support_sensors, planted[pi].sensor_ids);
      const double ovl = interval_overlap_ratio(e.interval, planted[pi].interval);
      if (jac > m.best_jaccard ||
          (jac == m.best_jaccard && ovl > m.overlap_of_best)) {
        m.best_jaccard = jac;
        m.overlap_of_best = ovl;
      }
      m.recovered = m.recovered || (jac >= min_jaccard && ovl >= min_overlap);
    }
    out.push_back(m);
  }
  return out;
}

inline Support support_of(const ReportEntry& e) {
  auto sensors = e.support_sensors;
  std::sort(sensors.begin(), sensors.end());
  return Support{e.center, std::move(sensors), e.interval};
}

// Number of reference entries exact-pmo-dominating each entry; all zeros
// means the mining output is consistent with the reference front.
inline std::vector<int> domination_audit(
    const std::vector<ReportEntry>& entries,
    const std::vector<ReportEntry>& reference, double p) {
  struct Probe {
    ScoreVector scores;
    Support support;
  };
  std::vector<Probe> ref;
  ref.reserve(reference.size());
  for (const auto& r : reference) ref.push_back({r.scores, support_of(r)});

  std::vector<int> counts;
  counts.reserve(entries.size());
  for (const auto& e : entries) {
    const Probe probe{e.scores, support_of(e)};
    int c = 0;
    for (const auto& r : ref) {
      if (pmo_dominates(r, probe, p, InclusionMode::exact)) ++c;
    }
    counts.push_back(c);
  }
  return counts;
}

inline void write_report_text(
    std::ostream& os, const std::vector<ReportEntry>& entries,
    const std::optional<std::vector<int>>& dominated_by,
    const std::optional<std::vector<TruthMatch>>& truth) {
  os << "entries: " << entries.size() << "\n";
  os << std::left << std::setw(6) << "idx" << std::setw(8) << "center"
     << std::setw(14) << "interval" << std::setw(8) << "length" << std::setw(6)
     << "area" << std::setw(12) << "alignment";
  if (dominated_by) os << std::setw(14) << "dominated_by";
  os << "\n";
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    os << std::left << std::setw(6) << i << std::setw(8) << e.center
       << std::setw(14)
       << ("[" + std::to_string(e.interval.t1) + "," +
           std::to_string(e.interval.t2) + "]")
       << std::setw(8) << e.scores.length << std::setw(6) << e.scores.area;
    if (alignment_defined(e.scores.alignment)) {
      os << std::setw(12) << std::setprecision(4) << e.scores.alignment;
    } else {
      os << std::setw(12) << "undefined";
    }
    if (dominated_by) os << std::setw(14) << (*dominated_by)[i];
    os << "\n";
  }
  if (dominated_by) {
    int bad = 0;
    for (int c : *dominated_by) bad += c > 0 ? 1 : 0;
    os << "domination audit: " << bad << " of " << entries.size()
       << " entries dominated by the reference\n";
  }
  if (truth) {
    for (const auto& m : *truth) {
      os << "planted " << m.planted_index << ": best jaccard "
         << std::setprecision(4) << m.best_jaccard << ", interval overlap "
         << m.overlap_of_best << (m.recovered ? " (recovered)" : "") << "\n";
    }
  }
}

inline void write_report_csv(
    std::ostream& os, const std::vector<ReportEntry>& entries,
    const std::optional<std::vector<int>>& dominated_by,
    const std::optional<std::vector<TruthMatch>>& truth) {
  os << "idx,center,t1,t2,length,area,alignment,dominated_by\n";
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    os << i << ',' << e.center << ',' << e.interval.t1 << ',' << e.interval.t2
       << ',' << e.scores.length << ',' << e.scores.area << ',';
    if (alignment_defined(e.scores.alignment))
      os << detail::format_double(e.scores.alignment);
    os << ',';
    if (dominated_by) os << (*dominated_by)[i];
    os << '\n';
  }
  if (truth) {
    os << "planted_index,best_jaccard,overlap_of_best,recovered\n";
    for (const auto& m : *truth) {
      os << m.planted_index << ',' << detail::format_double(m.best_jaccard)
         << ',' << detail::format_double(m.overlap_of_best) << ','
         << (m.recovered ? 1 : 0) << '\n';
    }
  }
}

}  // namespace stpm
