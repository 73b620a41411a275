// Command-line front end: synthetic data generation, mining (single and
// paired settings), the brute-force grid oracle, and report emission.
//
// Exit codes: 0 success, 2 usage or validation error, 1 internal error.
// STPM_LOG controls stderr verbosity: off, error, info (default), debug.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "stpm/stpm.hpp"

namespace fs = std::filesystem;

namespace {

enum class LogLevel { off = 0, error = 1, info = 2, debug = 3 };

LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("STPM_LOG");
    if (!env) return LogLevel::info;
    const std::string v(env);
    if (v == "off") return LogLevel::off;
    if (v == "error") return LogLevel::error;
    if (v == "debug") return LogLevel::debug;
    return LogLevel::info;
  }();
  return level;
}

void log_info(const std::string& msg) {
  if (log_level() >= LogLevel::info) std::cerr << "stpm: " << msg << "\n";
}

void log_error(const std::string& msg) {
  if (log_level() >= LogLevel::error) std::cerr << "stpm: error: " << msg << "\n";
}

struct Flags {
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};

stpm::MinerConfig load_config(const std::string& path, int default_t1_floor,
                              const Flags& flags) {
  stpm::MinerConfig cfg;
  if (!path.empty()) {
    cfg = stpm::load_miner_config(path, default_t1_floor);
  } else {
    cfg.t1_floor = default_t1_floor;
  }
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.threads) cfg.threads = *flags.threads;
  stpm::validate(cfg);
  return cfg;
}

stpm::Recording load_data_dir(const std::string& dir) {
  return stpm::load_recording(fs::path(dir) / "positions.csv",
                              fs::path(dir) / "activities.csv");
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw stpm::Error("cannot write " + path);
  return os;
}

int cmd_gen(const std::string& spec_path, const std::string& out_dir,
            const Flags& flags) {
  auto spec = stpm::load_synth_spec(spec_path);
  if (flags.seed) spec.seed = *flags.seed;
  auto result = stpm::generate_synthetic(spec);

  fs::create_directories(out_dir);
  stpm::save_recording(result.recording, fs::path(out_dir) / "positions.csv",
                       fs::path(out_dir) / "activities.csv");
  auto tf = open_out((fs::path(out_dir) / "truth.json").string());
  tf << stpm::truth_to_json(result.truth, spec).dump(2) << '\n';
  log_info("wrote positions.csv, activities.csv, truth.json to " + out_dir);
  return 0;
}

int cmd_mine(const std::string& data_dir, const std::string& config_path,
             const std::string& out_path, const Flags& flags) {
  const auto cfg = load_config(config_path, 1, flags);
  const auto rec = load_data_dir(data_dir);
  stpm::RunStats stats;
  const auto archive = stpm::run(cfg, rec, &stats);
  auto os = open_out(out_path);
  stpm::write_archive_jsonl(os, archive, "mine", cfg, stats.evaluations);
  log_info("archive entries: " + std::to_string(archive.size()) +
           ", evaluations: " + std::to_string(stats.evaluations) +
           ", wall: " + std::to_string(stats.wall_seconds) + "s");
  return 0;
}

int cmd_mine_disc(const std::string& pos_dir, const std::string& neg_dir,
                  const std::string& manifest_path,
                  const std::string& config_path, const std::string& out_path,
                  const Flags& flags) {
  const auto cfg = load_config(config_path, 200, flags);
  if (!cfg.min_d)
    throw stpm::ConfigError("paired mining requires min_d in the config");

  std::optional<stpm::PairedRecording> pr;
  if (!manifest_path.empty()) {
    const auto j = stpm::detail::load_json_file(manifest_path);
    stpm::detail::check_keys(j, {"positive", "negative"}, "manifest");
    const fs::path base = fs::path(manifest_path).parent_path();
    auto load_side = [&](const char* key) {
      const auto& sj = j.at(key);
      stpm::detail::check_keys(sj, {"positions", "activities"},
                               std::string("manifest.") + key);
      return stpm::load_recording(
          base / sj.at("positions").get<std::string>(),
          base / sj.at("activities").get<std::string>());
    };
    pr.emplace(load_side("positive"), load_side("negative"));
  } else {
    if (pos_dir.empty() || neg_dir.empty())
      throw stpm::ConfigError("need --pos and --neg directories, or --manifest");
    pr.emplace(load_data_dir(pos_dir), load_data_dir(neg_dir));
  }

  stpm::RunStats stats;
  const auto archive = stpm::run_discriminant(cfg, *pr, &stats);
  auto os = open_out(out_path);
  stpm::write_archive_jsonl(os, archive, "mine-disc", cfg, stats.evaluations);
  log_info("archive entries: " + std::to_string(archive.size()) +
           ", evaluations: " + std::to_string(stats.evaluations) +
           ", wall: " + std::to_string(stats.wall_seconds) + "s");
  return 0;
}

int cmd_oracle(const std::string& data_dir, const std::string& config_path,
               const std::string& grid_path, const std::string& out_path,
               const Flags& flags) {
  const auto cfg = load_config(config_path, 1, flags);
  const auto grid = stpm::load_grid_spec(grid_path);
  const auto rec = load_data_dir(data_dir);
  const auto t0 = std::chrono::steady_clock::now();
  const auto candidates = stpm::enumerate_candidates(rec, grid, cfg);
  const auto front = stpm::oracle_front(candidates, cfg.p);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  auto os = open_out(out_path);
  stpm::write_entries_jsonl(os, front, "oracle", cfg);
  log_info("candidates: " + std::to_string(candidates.size()) +
           ", front: " + std::to_string(front.size()) +
           ", wall: " + std::to_string(secs) + "s");
  return 0;
}

int cmd_report(const std::string& mine_path, const std::string& oracle_path,
               const std::string& truth_path, const std::string& out_path) {
  const auto mine = stpm::read_jsonl(mine_path);

  std::optional<std::vector<int>> dominated;
  if (!oracle_path.empty()) {
    const auto oracle = stpm::read_jsonl(oracle_path);
    const double p = mine.summary.at("config").at("p").get<double>();
    dominated = stpm::domination_audit(mine.entries, oracle.entries, p);
  }

  std::optional<std::vector<stpm::TruthMatch>> truth;
  if (!truth_path.empty()) {
    const auto tj = stpm::detail::load_json_file(truth_path);
    truth = stpm::match_ground_truth(mine.entries, stpm::truth_from_json(tj));
  }

  stpm::write_report_text(std::cout, mine.entries, dominated, truth);
  if (!out_path.empty()) {
    auto os = open_out(out_path);
    stpm::write_report_csv(os, mine.entries, dominated, truth);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stable spatio-temporal pattern miner"};
  app.require_subcommand(1);

  Flags flags;
  std::string config_path, out_path;

  auto add_common = [&](CLI::App* sub, bool with_threads) {
    sub->add_option("--seed", flags.seed, "override the seed");
    sub->add_option("--config", config_path, "JSON config file");
    if (with_threads)
      sub->add_option("--threads", flags.threads,
                      "parallel scoring of the initial population");
  };

  std::string spec_path, out_dir;
  auto* gen = app.add_subcommand("gen", "generate a synthetic recording");
  gen->add_option("--spec", spec_path, "synthetic spec JSON")->required();
  gen->add_option("--out-dir", out_dir, "output directory")->required();
  gen->add_option("--seed", flags.seed, "override the spec seed");

  std::string data_dir;
  auto* mine = app.add_subcommand("mine", "mine stable patterns");
  mine->add_option("--data", data_dir,
                   "directory with positions.csv and activities.csv")
      ->required();
  mine->add_option("--out", out_path, "JSON-lines output file")->required();
  add_common(mine, true);

  std::string pos_dir, neg_dir, manifest_path;
  auto* mdisc = app.add_subcommand("mine-disc",
                                   "mine discriminant patterns over a "
                                   "positive/negative recording pair");
  mdisc->add_option("--pos", pos_dir, "positive-setting data directory");
  mdisc->add_option("--neg", neg_dir, "negative-setting data directory");
  mdisc->add_option("--manifest", manifest_path,
                    "JSON manifest naming positive/negative files");
  mdisc->add_option("--out", out_path, "JSON-lines output file")->required();
  add_common(mdisc, true);

  std::string grid_path;
  auto* oracle = app.add_subcommand("oracle", "exhaustive grid search");
  oracle->add_option("--data", data_dir, "data directory")->required();
  oracle->add_option("--grid", grid_path, "grid spec JSON")->required();
  oracle->add_option("--out", out_path, "JSON-lines output file")->required();
  add_common(oracle, false);

  std::string mine_path, oracle_path, truth_path;
  auto* report = app.add_subcommand("report", "summarize mining output");
  report->add_option("--mine", mine_path, "mining JSON-lines file")->required();
  report->add_option("--oracle", oracle_path, "oracle JSON-lines file");
  report->add_option("--truth", truth_path, "ground truth JSON");
  report->add_option("--out", out_path, "CSV summary file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed()) return cmd_gen(spec_path, out_dir, flags);
    if (mine->parsed()) return cmd_mine(data_dir, config_path, out_path, flags);
    if (mdisc->parsed())
      return cmd_mine_disc(pos_dir, neg_dir, manifest_path, config_path,
                           out_path, flags);
    if (oracle->parsed())
      return cmd_oracle(data_dir, config_path, grid_path, out_path, flags);
    if (report->parsed())
      return cmd_report(mine_path, oracle_path, truth_path, out_path);
  } catch (const stpm::Error& e) {
    log_error(e.what());
    return 2;
  } catch (const std::exception& e) {
    log_error(std::string("internal: ") + e.what());
    return 1;
  }
  return 0;
}
