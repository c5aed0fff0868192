#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qotto/cycle.hpp"
#include "qotto/nelder_mead.hpp"
#include "qotto/noise.hpp"

namespace qotto {

struct OptimizeOptions {
  int random_starts = 4;  // in addition to the fixed start set
  std::uint64_t seed = 20070327;
  double floor_fraction = 1e-6;  // minimum allocation per branch, in units of tau_total
  IntegratorSettings settings;
  NelderMeadOptions nelder_mead;
  int threads = 1;
};

struct StartRecord {
  std::array<double, 4> start_fractions{};
  std::array<double, 4> final_fractions{};
  double power = 0.0;
  int evaluations = 0;
  bool converged = false;
  std::string error;  // empty unless the start failed
  std::vector<double> best_history;  // best power after each iteration
};

struct OptimizeResult {
  Schedule schedule;
  double power = 0.0;
  std::size_t best_start = 0;
  std::vector<StartRecord> trace;
};

// Fixed start set of the multi-start search (fractions summing to one).
std::vector<std::array<double, 4>> default_start_fractions();

// Maps unconstrained z (three free components; the first logit is pinned to
// zero) to fractions >= floor summing to one, and back.
std::array<double, 4> fractions_from_logits(const Eigen::Vector3d& z, double floor_fraction);
Eigen::Vector3d logits_from_fractions(const std::array<double, 4>& f, double floor_fraction);

// Maximizes the limit-cycle power over (tau_h, tau_ba, tau_c, tau_ab) with
// fixed sum tau_total. Throws InfeasibleSchedule when every start fails.
OptimizeResult optimize_allocations(const EngineParams& params, double tau_total, const OptimizeOptions& options = {});

struct GridPoint {
  Schedule schedule;
  double power = 0.0;
};

// Exhaustive search over fractions k/levels (k = 0..levels, summing to one)
// with both isochore fractions positive.
GridPoint grid_best(const EngineParams& params, double tau_total, int levels, const IntegratorSettings& settings = {},
                    int threads = 1);

struct CycleTimeRow {
  double tau = 0.0;
  Schedule schedule;  // Lambda = 0 optimum
  double power_ref = 0.0;
  double power_lubricated = 0.0;
  double entropy_ref = 0.0;
  double entropy_lubricated = 0.0;
  double w_friction_ref = 0.0;
  double w_friction_lubricated = 0.0;
};

// Optimize at Lambda = 0 for each tau, then re-evaluate the frozen schedule
// with (lambda_ba, lambda_ab).
std::vector<CycleTimeRow> power_vs_cycle_time(const EngineParams& params, const std::vector<double>& taus,
                                              double lambda_ba, double lambda_ab, const OptimizeOptions& options = {});

enum class SweepVariable { cycle_time, lambda, sigma, coupling };
enum class SweepObjective { power, entropy_production, w_friction };
enum class SweepMode { lindblad, noise };

std::string to_string(SweepVariable v);
std::string to_string(SweepObjective o);
std::string to_string(SweepMode m);

struct SweepSpec {
  SweepVariable variable = SweepVariable::lambda;
  std::vector<double> grid;
  EngineParams base;
  Schedule schedule;
  SweepObjective objective = SweepObjective::power;
  double lambda_ratio = 0.5;  // Lambda_ab / Lambda_ba

  // Non-empty, finite, strictly monotone grid.
  void validate() const;
};

struct SweepRow {
  double x = 0.0;
  double lambda_ab = 0.0;
  double lambda_ba = 0.0;
  double sigma_ab = 0.0;
  double sigma_ba = 0.0;
  double power = 0.0;
  double power_se = 0.0;
  double entropy_production = 0.0;  // per cycle
  double entropy_rate = 0.0;        // per unit time
  double entropy_rate_se = 0.0;
  double w_friction = 0.0;
  double w_friction_se = 0.0;
  double objective = 0.0;
};

// Dephasing strengths at one grid value: lambda variable -> Lambda_ab, sigma
// variable -> sigma_ab; the expansion value follows from the Lambda ratio.
struct DephasingPoint {
  double lambda_ab = 0.0;
  double lambda_ba = 0.0;
  double sigma_ab = 0.0;
  double sigma_ba = 0.0;
};
DephasingPoint dephasing_point(const SweepSpec& spec, double x, int segments);

// Lambda/sigma sweep at the fixed schedule. lindblad evaluates the
// deterministic limit cycle with `settings`; noise runs monte_carlo_cycle
// with `noise` (sigma fields overwritten per grid point).
std::vector<SweepRow> lambda_sigma_sweep(const SweepSpec& spec, SweepMode mode, const NoiseConfig& noise,
                                         const IntegratorSettings& settings, int threads = 1);

// Deterministic sweep over J at the fixed schedule (Lambda from the base params).
std::vector<SweepRow> coupling_sweep(const SweepSpec& spec, const IntegratorSettings& settings, int threads = 1);

struct FrictionTrace {
  double lambda_ab = 0.0;
  double lambda_ba = 0.0;
  std::vector<WorkTracePoint> expansion;
  std::vector<WorkTracePoint> compression;
};

// Running friction and field work along both adiabats of the limit cycle.
std::vector<FrictionTrace> friction_traces(const SweepSpec& spec, const IntegratorSettings& settings,
                                           int threads = 1);

}  // namespace qotto
