#pragma once

#include <vector>

#include "qotto/affine.hpp"
#include "qotto/types.hpp"

namespace qotto {

// Where the piecewise-constant field of segment k (0-based) is sampled on the
// linear ramp omega(t) = omega_start + (omega_end - omega_start) t / tau.
//   midpoint:       omega((k + 1/2) dt)
//   right_endpoint: omega((k + 1) dt), i.e. omega_k = omega_a + (omega_b - omega_a) k / N, k = 1..N
enum class OmegaLadder { midpoint, right_endpoint };

struct AdiabatParams {
  double omega_start = 0.0;
  double omega_end = 0.0;
  double tau = 0.0;
  double lambda = 0.0;  // dephasing coefficient of -Lambda [H,[H,.]]
  int segments = 512;
  OmegaLadder ladder = OmegaLadder::midpoint;

  void validate() const;
  double omega_at(double t) const;
  double segment_omega(int k) const;
};

struct IsochoreParams {
  double omega = 0.0;
  double temperature = 1.0;
  double relaxation_rate = 0.0;  // Gamma
  double pure_dephasing = 0.0;   // gamma; the magnitude is used, see isochore_generator

  void validate() const;
};

struct PathPoint {
  double t = 0.0;
  double omega = 0.0;
  BVector b = BVector::Zero();
};

struct Propagation {
  BVector final = BVector::Zero();
  AffineMap map;
  std::vector<PathPoint> path;  // includes both end points
};

// Projected i[H, .] on the algebra: a 5x5 matrix, antisymmetric on (b1, b2, b3)
// and zero on (b4, b5).
Matrix5 unitary_generator(double omega, double coupling);

// Projected -[H,[H, .]] (equals unitary_generator squared).
Matrix5 dephasing_generator(double omega, double coupling);

// exp(dt (A + Lambda A^2)) with A = unitary_generator(omega, J), in closed
// form. dt may be negative when lambda == 0.
Matrix5 segment_map(double omega, double coupling, double lambda, double dt);

// Piecewise-constant adiabat; Lambda > 0 adds the double-commutator dephasing.
// Throws NonPhysicalState if a boundary state loses positivity by more than 1e-8.
Propagation adiabat_propagate(const AdiabatParams& params, double coupling, const BVector& b0,
                              bool record_path = true);

// Same composed map without propagating a state.
AffineMap adiabat_map(const AdiabatParams& params, double coupling);

// Lindblad jump operator with its rate: L*(X) += rate (L^+ X L - 1/2 {L^+ L, X}).
struct JumpOperator {
  Matrix4c op;
  double rate = 0.0;
};

// Thermalizing jump operators in the energy eigenbasis of H(omega, J):
// |m><n| with rate Gamma p_m for every ordered pair (m, n), p the Gibbs
// populations. Pairs with E_n > E_m lower, their partners raise with the
// detailed-balance ratio exp(-(E_n - E_m)/T); the m == n projectors dephase.
// The resulting dissipator is Gamma (tr(rho) rho_eq - rho): every population
// and coherence relaxes at exactly Gamma, so T2 = T1 = 1/Gamma.
std::vector<JumpOperator> thermal_jump_operators(const IsochoreParams& params, double coupling);

// Full isochore generator: i[H, .] + thermal dissipator - |gamma| [H,[H, .]].
// Throws InvalidTemperature.
AffineGenerator isochore_generator(const IsochoreParams& params, double coupling);

// Dissipative part only (no commutator with H).
AffineGenerator isochore_dissipator(const IsochoreParams& params, double coupling);

// Exact exponential over tau; `samples` > 0 records samples + 1 equally spaced
// points.
Propagation isochore_propagate(const IsochoreParams& params, double coupling, double tau,
                               const BVector& b0, int samples = 0);

struct DephasingTimes {
  double t1 = 0.0;       // 1/Gamma
  double t2 = 0.0;       // from the coherence-decay eigenvalue of the generator
  double t2_star = 0.0;  // 1/(2 |gamma| Omega^2); +inf when gamma == 0
};

// Throws UndefinedTimescale when both Gamma and gamma vanish.
DephasingTimes dephasing_times(const IsochoreParams& params, double coupling);

}  // namespace qotto
