#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "stpm/io.hpp"
#include "stpm/report.hpp"
#include "stpm/synthetic.hpp"

using namespace stpm;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("stpm_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("empty config carries the documented defaults") {
  const auto cfg = parse_miner_config(json::object());
  CHECK(cfg.pop_size == 200);
  CHECK(cfg.eval_budget == 40000);
  CHECK(cfg.mutation_rate == 0.7);
  CHECK(cfg.crossover_rate == 0.3);
  CHECK(cfg.t1_floor == 1);
  CHECK_FALSE(cfg.min_d.has_value());
}

TEST_CASE("config parsing rejects unknown keys and bad values") {
  CHECK_THROWS_AS(parse_miner_config(json{{"min_length", 5}}), ParseError);
  CHECK_THROWS_AS(parse_miner_config(json{{"pop_size", "many"}}), ParseError);
  CHECK_THROWS_AS(
      parse_miner_config(json{{"mutation_rate", 0.5}, {"crossover_rate", 0.6}}),
      ConfigError);
}

TEST_CASE("mode default for t1_floor applies only when absent") {
  CHECK(parse_miner_config(json::object(), 200).t1_floor == 200);
  CHECK(parse_miner_config(json{{"t1_floor", 37}}, 200).t1_floor == 37);
}

TEST_CASE("config echo round trips") {
  MinerConfig cfg;
  cfg.min_d = 0.4;
  cfg.seed = 99;
  cfg.t1_floor = 200;
  const auto echoed = parse_miner_config(config_to_json(cfg));
  CHECK(echoed.min_d == cfg.min_d);
  CHECK(echoed.seed == cfg.seed);
  CHECK(echoed.t1_floor == cfg.t1_floor);
  CHECK(echoed.pop_size == cfg.pop_size);
}

TEST_CASE("synth spec parsing") {
  const json j{{"n_sensors", 8},
               {"n_steps", 30},
               {"background_sigma", 1.5},
               {"seed", 11},
               {"planted",
                {{{"sensor_ids", {2, 3}},
                  {"interval", {5, 15}},
                  {"base_amplitude", 2.0},
                  {"noise_sigma", 0.1}}}}};
  const auto spec = parse_synth_spec(j);
  CHECK(spec.n_sensors == 8);
  CHECK(spec.planted.size() == 1);
  CHECK(spec.planted[0].interval == Interval{5, 15});
  CHECK(spec.planted[0].mean_shift == 0.0);
  CHECK_FALSE(spec.mean_offset.has_value());

  CHECK_THROWS_AS(parse_synth_spec(json{{"n_sensors", 4}}), ParseError);
  CHECK_THROWS_AS(parse_synth_spec(json{{"n_sensors", 4},
                                        {"n_steps", 10},
                                        {"bogus", 1}}),
                  ParseError);
}

TEST_CASE("grid spec parsing") {
  const auto g = parse_grid_spec(json{{"len_levels", {2, 4}}, {"t_stride", 3}});
  CHECK(g.t_stride == 3);
  CHECK(g.radius_levels.empty());
  CHECK_THROWS_AS(parse_grid_spec(json{{"t_stride", 3}}), ParseError);
}

TEST_CASE("jsonl round trip for mining output") {
  SynthSpec spec;
  spec.n_sensors = 10;
  spec.n_steps = 40;
  spec.background_sigma = 1.0;
  spec.mean_offset = 2.0;
  spec.seed = 3;
  const auto synth = generate_synthetic(spec);
  MinerConfig cfg;
  cfg.min_len = 6;
  cfg.min_sigma = 0.2;
  cfg.min_area = 1;
  cfg.pop_size = 12;
  cfg.eval_budget = 150;
  cfg.seed = 4;
  RunStats stats;
  const auto arch = run(cfg, synth.recording, &stats);
  REQUIRE(arch.size() > 0);

  const auto dir = temp_dir("jsonl");
  {
    std::ofstream os(dir / "out.jsonl", std::ios::binary);
    write_archive_jsonl(os, arch, "mine", cfg, stats.evaluations);
  }
  const auto report = read_jsonl(dir / "out.jsonl");
  REQUIRE(report.entries.size() == arch.size());
  CHECK(report.summary.at("schema").get<int>() == 1);
  CHECK(report.summary.at("kind").get<std::string>() == "mine");
  CHECK(report.summary.at("evaluations").get<long long>() == 150);
  CHECK(report.summary.at("config").at("pop_size").get<int>() == 12);
  for (std::size_t i = 0; i < arch.size(); ++i) {
    const auto& e = arch.entries()[i];
    const auto& r = report.entries[i];
    CHECK(r.center == e.genotype.center);
    CHECK(r.interval == e.genotype.interval);
    CHECK(r.scores.length == e.scores.length);
    CHECK(r.scores.area == e.scores.area);
    CHECK(r.scores.alignment == e.scores.alignment);
    CHECK(r.support_sensors == e.support.sensors);
    CHECK_FALSE(r.disc.has_value());
  }
}

TEST_CASE("undefined alignment serializes as null and reads back") {
  ArchiveEntry e;
  e.genotype.center = 2;
  e.genotype.interval = {1, 5};
  e.genotype.radius = 1.0;
  e.scores = {4, 1, kUndefinedAlignment};
  e.support = Support{2, {2}, {1, 5}};
  const auto j = entry_to_json(e);
  CHECK(j.at("alignment").is_null());

  const auto dir = temp_dir("nullalign");
  {
    std::ofstream os(dir / "out.jsonl", std::ios::binary);
    os << j.dump() << "\n";
    os << json{{"schema", 1}, {"kind", "mine"}}.dump() << "\n";
  }
  const auto report = read_jsonl(dir / "out.jsonl");
  REQUIRE(report.entries.size() == 1);
  CHECK_FALSE(alignment_defined(report.entries[0].scores.alignment));
}

TEST_CASE("jsonl reader rejects files without a summary") {
  const auto dir = temp_dir("nosummary");
  {
    std::ofstream os(dir / "out.jsonl", std::ios::binary);
    os << json{{"center", 1}}.dump() << "\n";
  }
  CHECK_THROWS_AS(read_jsonl(dir / "out.jsonl"), ParseError);
}

TEST_CASE("jaccard and interval overlap") {
  CHECK(jaccard({1, 2, 3}, {2, 3, 4}) == 0.5);
  CHECK(jaccard({1, 2}, {3, 4}) == 0.0);
  CHECK(jaccard({5, 6}, {5, 6}) == 1.0);
  CHECK(interval_overlap_ratio({1, 10}, {1, 10}) == 1.0);
  CHECK(interval_overlap_ratio({6, 20}, {1, 10}) == 0.5);
  CHECK(interval_overlap_ratio({11, 20}, {1, 10}) == 0.0);
}

TEST_CASE("ground truth matching flags recoveries") {
  ReportEntry e;
  e.center = 3;
  e.interval = {10, 20};
  e.support_sensors = {2, 3, 4};
  e.scores = {10, 3, 0.9};
  PlantedPattern truth{{3, 4, 5}, Interval{12, 22}, 1.0, 0.0, 0.0};
  const auto matches = match_ground_truth({e}, {truth});
  REQUIRE(matches.size() == 1);
  CHECK(matches[0].best_jaccard == 0.5);
  CHECK(matches[0].recovered);

  PlantedPattern far{{8, 9}, Interval{1, 5}, 1.0, 0.0, 0.0};
  const auto missed = match_ground_truth({e}, {far});
  CHECK_FALSE(missed[0].recovered);
  CHECK(missed[0].best_jaccard == 0.0);
}

TEST_CASE("domination audit is clean against the output itself") {
  ReportEntry a;
  a.center = 2;
  a.interval = {1, 9};
  a.support_sensors = {1, 2, 3};
  a.scores = {8, 3, 0.7};
  ReportEntry b;
  b.center = 7;
  b.interval = {4, 12};
  b.support_sensors = {6, 7};
  b.scores = {8, 2, 0.9};
  const auto counts = domination_audit({a, b}, {a, b}, 0.5);
  CHECK(counts == std::vector<int>{0, 0});

  // A strictly better overlapping reference dominates.
  ReportEntry boss = a;
  boss.support_sensors = {1, 2, 3, 4};
  boss.scores = {9, 4, 0.8};
  const auto counts2 = domination_audit({a}, {boss}, 0.5);
  CHECK(counts2 == std::vector<int>{1});
}

TEST_CASE("report writers produce the expected shapes") {
  ReportEntry e;
  e.center = 3;
  e.interval = {10, 20};
  e.support_sensors = {2, 3, 4};
  e.scores = {10, 3, 0.29};
  std::ostringstream text;
  write_report_text(text, {e}, std::nullopt, std::nullopt);
  CHECK(text.str().find("entries: 1") != std::string::npos);
  CHECK(text.str().find("0.29") != std::string::npos);

  std::ostringstream csv;
  write_report_csv(csv, {e}, std::vector<int>{0}, std::nullopt);
  CHECK(csv.str().find("idx,center,t1,t2,length,area,alignment,dominated_by") !=
        std::string::npos);
  CHECK(csv.str().find("0,3,10,20,10,3,0.29,0") != std::string::npos);
}
