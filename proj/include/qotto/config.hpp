#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "qotto/cycle.hpp"
#include "qotto/noise.hpp"
#include "qotto/optimize.hpp"

namespace qotto {

enum class RunMode { cycle, sweep, optimize, montecarlo, control };

std::string to_string(RunMode m);
RunMode run_mode_from_string(const std::string& s);

struct SweepConfig {
  SweepVariable variable = SweepVariable::lambda;
  std::vector<double> grid;
  SweepObjective objective = SweepObjective::power;
  double lambda_ratio = 0.5;
  std::vector<SweepMode> modes{SweepMode::lindblad, SweepMode::noise};
  // Dephasing of the "lubricated" engine in cycle-time sweeps.
  double lubricated_lambda_ba = 1.28;
  double lubricated_lambda_ab = 0.64;

  bool operator==(const SweepConfig&) const = default;
};

struct RunConfig {
  RunMode mode = RunMode::cycle;
  EngineParams engine;
  Schedule schedule;
  NoiseConfig noise;
  SweepConfig sweep;
  IntegratorSettings integrator;
  int resolution = kDefaultResolution;
  std::string output_dir = "out";
  std::uint64_t seed = 20070327;
  int threads = 1;
  // optimize mode
  double tau_total = 2.10998;
  int random_starts = 4;
  double floor_fraction = 1e-6;

  bool operator==(const RunConfig&) const = default;

  void validate() const;

  SweepSpec sweep_spec() const;
  OptimizeOptions optimize_options() const;
};

// Flat sections [engine] [schedule] [noise] [sweep] [run] of `key = value`
// lines; `#` starts a comment. Physical engine keys are required, the rest
// default. Throws ParseError (line + key) or ValidationError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

nlohmann::ordered_json manifest_json(const RunConfig& config);
RunConfig parse_manifest(const std::string& text);

}  // namespace qotto
