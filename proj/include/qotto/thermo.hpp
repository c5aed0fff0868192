#pragma once

#include <span>

#include "qotto/affine.hpp"
#include "qotto/algebra.hpp"
#include "qotto/dynamics.hpp"
#include "qotto/types.hpp"

namespace qotto {

// Instantaneous thermodynamic state along a cycle.
struct ThermoSample {
  double t = 0.0;
  double omega = 0.0;
  BVector b = BVector::Zero();
  double energy = 0.0;
  double power_field = 0.0;
  double power_friction = 0.0;
  double heat_flow = 0.0;
  double energy_entropy = 0.0;
  double von_neumann_entropy = 0.0;
};

// Per-cycle totals. Heats are absorbed by the working medium (Q_h > 0 on a
// working engine), works are done on the medium (W_net < 0 when work is
// extracted); power = -W_net / tau.
struct CycleSummary {
  double w_net = 0.0;
  double w_friction = 0.0;
  double w_field = 0.0;
  double q_h = 0.0;
  double q_c = 0.0;
  double power = 0.0;
  double entropy_production = 0.0;
  double tau = 0.0;
};

// Compression/decompression power: dOmega/dt <H> / Omega, dOmega/dt = omega omega_dot / Omega.
double power_field(double omega, double omega_dot, double coupling, const BVector& b);

// Power against friction: (omega_dot J / Omega^2) (J b1 - omega b2).
double power_friction(double omega, double omega_dot, double coupling, const BVector& b);

// <L_D*(H)>: rate of change of <H> produced by the generator at fixed omega.
double heat_flow(const AffineGenerator& generator, const BVector& b, double omega, double coupling);

// Shannon entropy of the populations in the eigenbasis of H(omega, J); a
// degenerate level contributes the eigenvalues of rho compressed onto it.
double energy_entropy(const BVector& b, double omega, double coupling);

// -tr(rho ln rho).
double von_neumann_entropy(const DensityState& rho);
double von_neumann_entropy(const BVector& b);

// -(Q_h/T_h + Q_c/T_c) with heats absorbed by the medium; >= 0 at a limit cycle.
double entropy_production(double q_h, double q_c, double t_hot, double t_cold);

struct WorkSplit {
  double friction = 0.0;
  double field = 0.0;
  double total() const { return friction + field; }
};

// Trapezoidal integral of the friction and field powers along a linear ramp
// path (constant omega_dot taken from the end points of the path).
WorkSplit accumulate_works(std::span<const PathPoint> path, double coupling);

// Running integrals at every path point (first entry is zero).
std::vector<WorkSplit> accumulated_work_trace(std::span<const PathPoint> path, double coupling);

}  // namespace qotto
