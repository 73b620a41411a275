// Run parameters for the miners and the grid oracle.
#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "stpm/errors.hpp"
#include "stpm/recording.hpp"

namespace stpm {

struct MinerConfig {
  int min_len = 10;        // target interval length at initialization
  double min_sigma = 0.5;  // alignment threshold driving the initial radius
  int min_area = 2;        // smallest admissible ball size
  double p = 0.5;          // support-inclusion fraction for dominance
  int pop_size = 200;
  long long eval_budget = 40000;
  double mutation_rate = 0.7;
  double crossover_rate = 0.3;
  std::uint64_t seed = 1;
  int t1_floor = 1;                 // earliest admissible interval start
  std::optional<double> min_d;      // paired mode: required activity difference
  bool sigma_diff_objective = false;  // paired mode: optimize |sigma+ - sigma-|
                                      // instead of min(sigma+, sigma-)
  int threads = 1;  // parallel scoring of the initial population only
};

inline void validate(const MinerConfig& cfg) {
  if (cfg.pop_size < 2) throw ConfigError("pop_size must be >= 2");
  if (cfg.eval_budget < cfg.pop_size)
    throw ConfigError("eval_budget must be >= pop_size");
  if (cfg.min_len < 1) throw ConfigError("min_len must be >= 1");
  if (cfg.min_area < 1) throw ConfigError("min_area must be >= 1");
  if (!(cfg.p >= 0.0 && cfg.p <= 1.0)) throw ConfigError("p must be in [0, 1]");
  if (!(cfg.mutation_rate >= 0.0 && cfg.mutation_rate <= 1.0) ||
      !(cfg.crossover_rate >= 0.0 && cfg.crossover_rate <= 1.0))
    throw ConfigError("operator rates must be in [0, 1]");
  if (std::abs(cfg.mutation_rate + cfg.crossover_rate - 1.0) > 1e-9)
    throw ConfigError("mutation_rate + crossover_rate must equal 1");
  if (cfg.t1_floor < 1) throw ConfigError("t1_floor must be >= 1");
  if (cfg.min_d && !(std::isfinite(*cfg.min_d) && *cfg.min_d >= 0.0))
    throw ConfigError("min_d must be a finite nonnegative value");
  if (cfg.threads < 1) throw ConfigError("threads must be >= 1");
  if (!std::isfinite(cfg.min_sigma)) throw ConfigError("min_sigma must be finite");
}

inline void validate_for(const MinerConfig& cfg, int n_steps) {
  validate(cfg);
  if (cfg.t1_floor > n_steps - 1)
    throw ConfigError("t1_floor " + std::to_string(cfg.t1_floor) +
                      " leaves no room for an interval in " +
                      std::to_string(n_steps) + " steps");
}

}  // namespace stpm
