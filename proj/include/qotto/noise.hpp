#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qotto/cycle.hpp"
#include "qotto/rng.hpp"
#include "qotto/types.hpp"

namespace qotto {

// Zero-mean, unit-variance families for the segment perturbations.
enum class NoiseDistribution { uniform, gaussian };

// What the noise perturbs on each adiabat segment.
//   segment_time: dt_k = tau/N + sigma xi_k            (the dephasing synthesis)
//   frequency:    omega_k -> omega_k + sigma xi_k      (negative control)
enum class NoiseKind { segment_time, frequency };

// restart: every cycle starts from the limit cycle of the ensemble-averaged map.
// continuous: one long noisy trajectory, cycles follow each other.
enum class EnsembleMode { restart, continuous };

std::string to_string(NoiseDistribution d);
std::string to_string(NoiseKind k);
std::string to_string(EnsembleMode m);

struct NoiseConfig {
  int segments = 200;  // N, per adiabat
  // Standard deviation of the per-segment perturbation: a time for
  // segment_time noise, an energy for frequency noise.
  double sigma_ab = 0.0;
  double sigma_ba = 0.0;
  NoiseDistribution distribution = NoiseDistribution::uniform;
  NoiseKind kind = NoiseKind::segment_time;
  EnsembleMode mode = EnsembleMode::restart;
  std::uint64_t seed = 20070327;
  int n_cycles = 2000;
  int n_batches = 10;
  // Segment times may come out negative when sigma > tau/N; the segment map is
  // then a backward unitary step. Set false to require dt_k > 0.
  bool allow_time_reversal = true;

  void validate() const;

  bool operator==(const NoiseConfig&) const = default;
};

// sigma = sqrt(2 tau_ad Lambda / N): the segment-time spread whose ensemble
// average reproduces -Lambda [H,[H,.]] on the adiabat.
double sigma_for_lambda(double lambda, double tau_ad, int segments);
// Inverse: Lambda = N sigma^2 / (2 tau_ad).
double lambda_for_sigma(double sigma, double tau_ad, int segments);

// Draw with zero mean and unit variance from two uniforms in [0, 1).
double unit_variate(NoiseDistribution d, const SubstreamRng::Uniforms& u);

// Random numbers of one branch of one cycle.
struct NoiseStream {
  SubstreamRng rng;
  std::uint64_t cycle = 0;
  std::uint32_t branch = 0;
  NoiseDistribution distribution = NoiseDistribution::uniform;

  double variate(int segment) const { return unit_variate(distribution, rng.uniforms(cycle, branch, segment)); }
};

// dt_k = (tau/N)(1 + r_k) with r_k = (N/tau) sigma xi_k. Throws InvalidSigma
// when positivity is required but the distribution cannot guarantee it.
std::vector<double> sample_segment_times(double tau, int segments, double sigma, const NoiseStream& stream,
                                         bool allow_time_reversal = true);

struct NoisyAdiabat {
  BVector final = BVector::Zero();
  double work = 0.0;  // E(omega_end) - E(omega_start), done on the medium
  double w_friction = 0.0;
  double w_field = 0.0;
  double duration = 0.0;  // realized sum of dt_k
};

// N unitary segments at omega_k = omega_start + (omega_end - omega_start) k/N,
// k = 1..N, with randomized durations. Work is booked at the field steps.
NoisyAdiabat noisy_adiabat(const BVector& b0, double omega_start, double omega_end, double tau, int segments,
                           double sigma, double coupling, const NoiseStream& stream,
                           bool allow_time_reversal = true);

// Linear part of the same single-trajectory map.
Matrix5 noisy_adiabat_map(double omega_start, double omega_end, double tau, int segments, double sigma,
                          double coupling, const NoiseStream& stream);

// Negative control: fixed dt = tau/N, field omega_k + sigma_omega xi_k.
NoisyAdiabat frequency_noise_adiabat(const BVector& b0, double omega_start, double omega_end, double tau,
                                     int segments, double sigma_omega, double coupling, const NoiseStream& stream);

Matrix5 frequency_noise_adiabat_map(double omega_start, double omega_end, double tau, int segments,
                                    double sigma_omega, double coupling, const NoiseStream& stream);

// standard_error is iid_standard_error for restart ensembles (independent
// cycles) and batch_standard_error for a continuous trajectory.
struct EnsembleStat {
  double mean = 0.0;
  double standard_error = 0.0;
  double iid_standard_error = 0.0;    // per-cycle sample deviation / sqrt(n)
  double batch_standard_error = 0.0;  // spread of n_batches batch means
};

struct MonteCarloResult {
  EnsembleStat power;
  EnsembleStat entropy_production;  // per cycle
  EnsembleStat entropy_rate;        // per cycle / average cycle time
  EnsembleStat w_friction;
  EnsembleStat w_net;
  EnsembleStat q_h;
  EnsembleStat q_c;
  double nominal_cycle_time = 0.0;
  double mean_cycle_time = 0.0;  // realized
  double lambda_ab_equivalent = 0.0;
  double lambda_ba_equivalent = 0.0;
  int n_cycles = 0;
  int n_batches = 0;
  std::vector<double> batch_power;
  std::vector<double> batch_entropy_rate;
  // Deterministic engine on the same segment ladder with the equivalent
  // Lindblad dephasing (segment_time) or without noise (frequency).
  CycleSummary reference;
  BVector start = BVector::Zero();
};

// Engine Lambda values are ignored: the adiabats are unitary and the noise
// supplies the dephasing.
MonteCarloResult monte_carlo_cycle(const EngineParams& params, const Schedule& schedule, const NoiseConfig& noise,
                                   int threads = 1);

// Engine parameters with Lambda_ab, Lambda_ba set to the ensemble-equivalent
// values of `noise` (zero for frequency noise).
EngineParams equivalent_lindblad_params(const EngineParams& params, const Schedule& schedule,
                                        const NoiseConfig& noise);

}  // namespace qotto
