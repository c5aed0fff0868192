#pragma once

#include <array>
#include <string>
#include <vector>

#include "qotto/affine.hpp"
#include "qotto/dynamics.hpp"
#include "qotto/thermo.hpp"

namespace qotto {

struct EngineParams {
  double coupling = 2.0;  // J
  double omega_a = 5.08364;
  double omega_b = 12.6355;
  double t_hot = 7.5;
  double t_cold = 1.5;
  double gamma_hot = 1.16748;   // Gamma_h
  double gamma_cold = 1.16748;  // Gamma_c
  double dephasing_hot = -0.05;  // gamma_h as quoted; the dissipator uses |gamma_h|
  double dephasing_cold = -0.06; // gamma_c as quoted
  double lambda_ab = 0.0;  // compression adiabat (omega_a -> omega_b)
  double lambda_ba = 0.0;  // expansion adiabat (omega_b -> omega_a)

  // Throws ValidationError naming the offending key.
  void validate() const;

  IsochoreParams hot_isochore() const;
  IsochoreParams cold_isochore() const;

  // Reference parameter set with Lambda = 0.
  static EngineParams reference();

  bool operator==(const EngineParams&) const = default;
};

struct Schedule {
  double tau_h = 1.0795;
  double tau_ba = 0.01478;
  double tau_c = 1.0088;
  double tau_ab = 0.0069;

  double total() const { return tau_h + tau_ba + tau_c + tau_ab; }
  std::array<double, 4> as_array() const { return {tau_h, tau_ba, tau_c, tau_ab}; }
  static Schedule from_array(const std::array<double, 4>& t) { return {t[0], t[1], t[2], t[3]}; }

  // All >= 0 and both isochores > 0.
  void validate() const;

  bool operator==(const Schedule&) const = default;
};

struct IntegratorSettings {
  int segments = 512;
  OmegaLadder ladder = OmegaLadder::midpoint;

  bool operator==(const IntegratorSettings&) const = default;
};

// Temporal order of the branches, starting at the beginning of the hot isochore.
enum class Branch { hot = 0, expansion = 1, cold = 2, compression = 3 };

const char* branch_name(Branch b);

struct BranchMaps {
  AffineMap hot;          // U_h, isochore at omega_b
  AffineMap expansion;    // U_ba, omega_b -> omega_a
  AffineMap cold;         // U_c, isochore at omega_a
  AffineMap compression;  // U_ab, omega_a -> omega_b

  const AffineMap& operator[](Branch b) const;

  // One period h -> ba -> c -> ab, anchored at the start of the hot isochore.
  AffineMap cycle() const { return cycle_from(Branch::hot); }

  // One period anchored at the start of `anchor`.
  AffineMap cycle_from(Branch anchor) const;
};

BranchMaps branch_maps(const EngineParams& params, const Schedule& schedule,
                       const IntegratorSettings& settings = {});

AdiabatParams expansion_adiabat(const EngineParams& params, const Schedule& schedule,
                                const IntegratorSettings& settings);
AdiabatParams compression_adiabat(const EngineParams& params, const Schedule& schedule,
                                  const IntegratorSettings& settings);

double spectral_radius(const Matrix5& m);

// Fixed point b* = (I - M)^{-1} c. Throws NoContraction when the spectral
// radius of M is >= 1 - 1e-12. Falls back to iteration if the direct solve
// leaves a residual above 1e-12.
BVector limit_cycle(const AffineMap& cycle);

struct IterationResult {
  BVector b = BVector::Zero();
  int iterations = 0;
  bool converged = false;
};

IterationResult iterate_limit_cycle(const AffineMap& cycle, const BVector& start, double tolerance = 1e-13,
                                    int max_iterations = 100000);

struct WorkTracePoint {
  double t = 0.0;  // time since the start of the branch
  double omega = 0.0;
  double scale = 0.0;  // Omega(t)
  double w_friction = 0.0;
  double w_field = 0.0;
};

struct CycleRecord {
  std::vector<ThermoSample> samples;
  std::vector<Branch> branch_of;  // parallel to samples
  std::array<std::size_t, 5> boundaries{};  // first sample of each branch, then samples.size()
  CycleSummary summary;
  BVector anchor = BVector::Zero();  // limit-cycle state at the start of the hot isochore
  std::vector<WorkTracePoint> expansion_work;
  std::vector<WorkTracePoint> compression_work;
};

inline constexpr int kDefaultResolution = 200;

// Limit-cycle record sampled with `resolution` intervals per branch.
CycleRecord run_cycle(const EngineParams& params, const Schedule& schedule, int resolution = kDefaultResolution,
                      const IntegratorSettings& settings = {});

// Limit-cycle totals without the sampled record.
CycleSummary summarize_cycle(const EngineParams& params, const Schedule& schedule,
                             const IntegratorSettings& settings = {});

// Limit-cycle power -W_net / tau from the branch maps alone.
double cycle_power(const EngineParams& params, const Schedule& schedule, const IntegratorSettings& settings = {});

// Totals of one pass through the cycle starting at `start` (anchored at the
// hot isochore), with maps already built. Used for off-cycle bookkeeping.
CycleSummary pass_summary(const EngineParams& params, const Schedule& schedule, const BranchMaps& maps,
                          const BVector& start);

}  // namespace qotto
