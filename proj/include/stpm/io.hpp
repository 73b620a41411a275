// JSON plumbing: config / synthetic-spec / grid-spec documents, ground-truth
// files, and the JSON-lines archive format shared by the mining commands.
// One entry object per line, then a single summary object with "schema": 1.
#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "stpm/config.hpp"
#include "stpm/discriminant.hpp"
#include "stpm/engine.hpp"
#include "stpm/errors.hpp"
#include "stpm/oracle.hpp"
#include "stpm/synthetic.hpp"

namespace stpm {

using json = nlohmann::json;

namespace detail {

inline json load_json_file(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open " + path.string());
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw ParseError(path.filename().string() + ": " + e.what());
  }
}

// Rejects unknown keys so config typos fail loudly.
inline void check_keys(const json& j, std::initializer_list<const char*> known,
                       const std::string& what) {
  if (!j.is_object()) throw ParseError(what + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw ParseError(what + ": unknown key '" + key + "'");
  }
}

inline json alignment_to_json(double a) {
  if (!alignment_defined(a)) return nullptr;
  return a;
}

inline double alignment_from_json(const json& j) {
  if (j.is_null()) return kUndefinedAlignment;
  return j.get<double>();
}

}  // namespace detail

inline MinerConfig parse_miner_config(const json& j, int default_t1_floor = 1) {
  detail::check_keys(j,
                     {"min_len", "min_sigma", "min_area", "p", "pop_size",
                      "eval_budget", "mutation_rate", "crossover_rate", "seed",
                      "t1_floor", "min_d", "sigma_diff_objective", "threads"},
                     "config");
  MinerConfig cfg;
  cfg.t1_floor = default_t1_floor;
  try {
    if (j.contains("min_len")) cfg.min_len = j["min_len"].get<int>();
    if (j.contains("min_sigma")) cfg.min_sigma = j["min_sigma"].get<double>();
    if (j.contains("min_area")) cfg.min_area = j["min_area"].get<int>();
    if (j.contains("p")) cfg.p = j["p"].get<double>();
    if (j.contains("pop_size")) cfg.pop_size = j["pop_size"].get<int>();
    if (j.contains("eval_budget"))
      cfg.eval_budget = j["eval_budget"].get<long long>();
    if (j.contains("mutation_rate"))
      cfg.mutation_rate = j["mutation_rate"].get<double>();
    if (j.contains("crossover_rate"))
      cfg.crossover_rate = j["crossover_rate"].get<double>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("t1_floor")) cfg.t1_floor = j["t1_floor"].get<int>();
    if (j.contains("min_d") && !j["min_d"].is_null())
      cfg.min_d = j["min_d"].get<double>();
    if (j.contains("sigma_diff_objective"))
      cfg.sigma_diff_objective = j["sigma_diff_objective"].get<bool>();
    if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  validate(cfg);
  return cfg;
}

inline MinerConfig load_miner_config(const std::filesystem::path& path,
                                     int default_t1_floor = 1) {
  return parse_miner_config(detail::load_json_file(path), default_t1_floor);
}

inline json config_to_json(const MinerConfig& cfg) {
  json j;
  j["min_len"] = cfg.min_len;
  j["min_sigma"] = cfg.min_sigma;
  j["min_area"] = cfg.min_area;
  j["p"] = cfg.p;
  j["pop_size"] = cfg.pop_size;
  j["eval_budget"] = cfg.eval_budget;
  j["mutation_rate"] = cfg.mutation_rate;
  j["crossover_rate"] = cfg.crossover_rate;
  j["seed"] = cfg.seed;
  j["t1_floor"] = cfg.t1_floor;
  j["min_d"] = cfg.min_d ? json(*cfg.min_d) : json(nullptr);
  j["sigma_diff_objective"] = cfg.sigma_diff_objective;
  j["threads"] = cfg.threads;
  return j;
}

inline SynthSpec parse_synth_spec(const json& j) {
  detail::check_keys(j,
                     {"n_sensors", "n_steps", "planted", "background_sigma",
                      "mean_offset", "seed"},
                     "synthetic spec");
  SynthSpec spec;
  try {
    spec.n_sensors = j.at("n_sensors").get<int>();
    spec.n_steps = j.at("n_steps").get<int>();
    if (j.contains("background_sigma"))
      spec.background_sigma = j["background_sigma"].get<double>();
    if (j.contains("mean_offset") && !j["mean_offset"].is_null())
      spec.mean_offset = j["mean_offset"].get<double>();
    if (j.contains("seed")) spec.seed = j["seed"].get<std::uint64_t>();
    for (const auto& pj : j.value("planted", json::array())) {
      detail::check_keys(pj,
                         {"sensor_ids", "interval", "base_amplitude",
                          "noise_sigma", "mean_shift"},
                         "planted pattern");
      PlantedPattern p;
      p.sensor_ids = pj.at("sensor_ids").get<std::vector<int>>();
      const auto iv = pj.at("interval").get<std::vector<int>>();
      if (iv.size() != 2)
        throw ParseError("planted interval must be [t1, t2]");
      p.interval = Interval{iv[0], iv[1]};
      p.base_amplitude = pj.value("base_amplitude", 1.0);
      p.noise_sigma = pj.value("noise_sigma", 0.0);
      p.mean_shift = pj.value("mean_shift", 0.0);
      spec.planted.push_back(std::move(p));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("synthetic spec: ") + e.what());
  }
  return spec;
}

inline SynthSpec load_synth_spec(const std::filesystem::path& path) {
  return parse_synth_spec(detail::load_json_file(path));
}

inline GridSpec parse_grid_spec(const json& j) {
  detail::check_keys(j, {"radius_levels", "t_stride", "len_levels"},
                     "grid spec");
  GridSpec g;
  try {
    if (j.contains("radius_levels") && !j["radius_levels"].is_null())
      g.radius_levels = j["radius_levels"].get<std::vector<double>>();
    if (j.contains("t_stride")) g.t_stride = j["t_stride"].get<int>();
    g.len_levels = j.at("len_levels").get<std::vector<int>>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("grid spec: ") + e.what());
  }
  return g;
}

inline GridSpec load_grid_spec(const std::filesystem::path& path) {
  return parse_grid_spec(detail::load_json_file(path));
}

inline json truth_to_json(const std::vector<PlantedPattern>& planted,
                          const SynthSpec& spec) {
  json out;
  out["schema"] = 1;
  out["n_sensors"] = spec.n_sensors;
  out["n_steps"] = spec.n_steps;
  json arr = json::array();
  for (const auto& p : planted) {
    json pj;
    pj["sensor_ids"] = p.sensor_ids;
    pj["interval"] = {p.interval.t1, p.interval.t2};
    pj["base_amplitude"] = p.base_amplitude;
    pj["noise_sigma"] = p.noise_sigma;
    pj["mean_shift"] = p.mean_shift;
    arr.push_back(pj);
  }
  out["planted"] = arr;
  return out;
}

inline std::vector<PlantedPattern> truth_from_json(const json& j) {
  std::vector<PlantedPattern> out;
  try {
    for (const auto& pj : j.at("planted")) {
      PlantedPattern p;
      p.sensor_ids = pj.at("sensor_ids").get<std::vector<int>>();
      const auto iv = pj.at("interval").get<std::vector<int>>();
      p.interval = Interval{iv.at(0), iv.at(1)};
      p.base_amplitude = pj.value("base_amplitude", 1.0);
      p.noise_sigma = pj.value("noise_sigma", 0.0);
      p.mean_shift = pj.value("mean_shift", 0.0);
      out.push_back(std::move(p));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("ground truth: ") + e.what());
  }
  return out;
}

// In-memory form of one JSON-lines entry; covers both mining modes.
struct ReportEntry {
  int center = 0;
  std::optional<int> center_neg;
  Weights weights;
  Interval interval;
  double radius = 0.0;
  ScoreVector scores;
  std::vector<int> support_sensors;
  std::optional<DiscriminantScores> disc;
};

inline json entry_to_json(const ArchiveEntry& e) {
  json j;
  j["center"] = e.genotype.center;
  j["weights"] = {e.genotype.weights.w1, e.genotype.weights.w2,
                  e.genotype.weights.w3};
  j["interval"] = {e.genotype.interval.t1, e.genotype.interval.t2};
  j["radius"] = e.genotype.radius;
  j["length"] = e.scores.length;
  j["area"] = e.scores.area;
  j["alignment"] = detail::alignment_to_json(e.scores.alignment);
  j["support_sensors"] = e.support.sensors;
  return j;
}

inline json entry_to_json(const DiscriminantEntry& e) {
  json j;
  j["center"] = e.genotype.center_pos;
  j["center_neg"] = e.genotype.center_neg;
  j["weights"] = {e.genotype.weights.w1, e.genotype.weights.w2,
                  e.genotype.weights.w3};
  j["interval"] = {e.genotype.interval.t1, e.genotype.interval.t2};
  j["radius"] = e.genotype.radius;
  j["length"] = e.scores.length;
  j["area"] = e.scores.area;
  j["alignment"] = detail::alignment_to_json(e.scores.alignment);
  j["support_sensors"] = e.support.sensors;
  j["area_pos"] = e.detail.area_pos;
  j["area_neg"] = e.detail.area_neg;
  j["align_pos"] = detail::alignment_to_json(e.detail.align_pos);
  j["align_neg"] = detail::alignment_to_json(e.detail.align_neg);
  j["activity_diff"] = e.detail.activity_diff;
  return j;
}

// Entries first, summary last. Wall-clock time is deliberately not part of
// the file so identical inputs yield identical bytes; the CLI logs timing to
// stderr instead.
template <class Entry>
void write_archive_jsonl(std::ostream& os, const ParetoArchive<Entry>& arch,
                         const std::string& kind, const MinerConfig& cfg,
                         long long evaluations) {
  for (const auto& e : arch.entries()) os << entry_to_json(e).dump() << '\n';
  json summary;
  summary["schema"] = 1;
  summary["kind"] = kind;
  summary["entries"] = arch.size();
  summary["evaluations"] = evaluations;
  summary["seed"] = cfg.seed;
  summary["config"] = config_to_json(cfg);
  os << summary.dump() << '\n';
}

inline void write_entries_jsonl(std::ostream& os,
                                const std::vector<ArchiveEntry>& entries,
                                const std::string& kind,
                                const MinerConfig& cfg) {
  for (const auto& e : entries) os << entry_to_json(e).dump() << '\n';
  json summary;
  summary["schema"] = 1;
  summary["kind"] = kind;
  summary["entries"] = entries.size();
  summary["evaluations"] = static_cast<long long>(entries.size());
  summary["seed"] = cfg.seed;
  summary["config"] = config_to_json(cfg);
  os << summary.dump() << '\n';
}

struct JsonlReport {
  std::vector<ReportEntry> entries;
  json summary;
};

inline JsonlReport read_jsonl(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open " + path.string());
  JsonlReport report;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(path.filename().string() + ":" +
                       std::to_string(lineno) + ": " + e.what());
    }
    if (j.contains("schema")) {
      report.summary = j;
      continue;
    }
    try {
      ReportEntry e;
      e.center = j.at("center").get<int>();
      if (j.contains("center_neg"))
        e.center_neg = j["center_neg"].get<int>();
      const auto w = j.at("weights").get<std::vector<double>>();
      e.weights = Weights{w.at(0), w.at(1), w.at(2)};
      const auto iv = j.at("interval").get<std::vector<int>>();
      e.interval = Interval{iv.at(0), iv.at(1)};
      e.radius = j.at("radius").get<double>();
      e.scores.length = j.at("length").get<int>();
      e.scores.area = j.at("area").get<int>();
      e.scores.alignment = detail::alignment_from_json(j.at("alignment"));
      e.support_sensors = j.at("support_sensors").get<std::vector<int>>();
      if (j.contains("activity_diff")) {
        DiscriminantScores d;
        d.length = e.scores.length;
        d.area_pos = j.at("area_pos").get<int>();
        d.area_neg = j.at("area_neg").get<int>();
        d.align_pos = detail::alignment_from_json(j.at("align_pos"));
        d.align_neg = detail::alignment_from_json(j.at("align_neg"));
        d.activity_diff = j.at("activity_diff").get<double>();
        e.disc = d;
      }
      report.entries.push_back(std::move(e));
    } catch (const json::exception& ex) {
      throw ParseError(path.filename().string() + ":" +
                       std::to_string(lineno) + ": " + ex.what());
    }
  }
  if (report.summary.is_null())
    throw ParseError(path.filename().string() + ": missing summary line");
  return report;
}

}  // namespace stpm
