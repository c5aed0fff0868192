#include "qotto/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "qotto/errors.hpp"

namespace qotto {

namespace {

double scale_squared_checked(double omega, double coupling) {
  const double s2 = omega * omega + coupling * coupling;
  if (!(s2 > 0.0)) throw DegenerateScale("Omega = 0: power split undefined");
  return s2;
}

double shannon(double p) {
  if (p < -kPositivityTolerance) throw NonPhysicalState("negative population " + std::to_string(p));
  p = std::clamp(p, 0.0, 1.0);
  return p > 0.0 ? -p * std::log(p) : 0.0;
}

double omega_dot_of(std::span<const PathPoint> path) {
  const double dt = path.back().t - path.front().t;
  return dt > 0.0 ? (path.back().omega - path.front().omega) / dt : 0.0;
}

}  // namespace

double power_field(double omega, double omega_dot, double coupling, const BVector& b) {
  const double s2 = scale_squared_checked(omega, coupling);
  // dOmega/dt <H> / Omega = omega omega_dot <H> / Omega^2
  return omega * omega_dot * energy(b, omega, coupling) / s2;
}

double power_friction(double omega, double omega_dot, double coupling, const BVector& b) {
  const double s2 = scale_squared_checked(omega, coupling);
  return omega_dot * coupling / s2 * (coupling * b[0] - omega * b[1]);
}

double heat_flow(const AffineGenerator& generator, const BVector& b, double omega, double coupling) {
  const BVector rate = generator.rate(b);
  return omega * rate[0] + coupling * rate[1];
}

double energy_entropy(const BVector& b, double omega, double coupling) {
  const Matrix4c rho = density_matrix(b);
  const EnergySpectrum spectrum = energy_eigensystem(hamiltonian(omega, coupling));
  double s = 0.0;
  for (const EnergyLevel& level : spectrum.levels) {
    if (level.basis.cols() == 1) {
      s += shannon((level.basis.adjoint() * rho * level.basis)(0, 0).real());
    } else {
      const Eigen::MatrixXcd block = level.basis.adjoint() * rho * level.basis;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(block, Eigen::EigenvaluesOnly);
      for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) s += shannon(solver.eigenvalues()[k]);
    }
  }
  return s;
}

double von_neumann_entropy(const DensityState& rho) {
  const Eigen::Vector4d ev = rho.eigenvalues();
  double s = 0.0;
  for (int k = 0; k < 4; ++k) s += shannon(ev[k]);
  return s;
}

double von_neumann_entropy(const BVector& b) {
  // Closed-form spectrum of the block-diagonal state.
  const double r = std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]) / std::sqrt(2.0);
  const double a = 0.25 + 0.5 * b[4];
  const double d = 0.25 - 0.5 * b[4];
  const double c = b[3] / std::sqrt(2.0);
  return shannon(a + r) + shannon(a - r) + shannon(d + c) + shannon(d - c);
}

double entropy_production(double q_h, double q_c, double t_hot, double t_cold) {
  if (!(t_hot > 0.0) || !(t_cold > 0.0))
    throw InvalidTemperature("bath temperatures must be positive");
  return -(q_h / t_hot + q_c / t_cold);
}

std::vector<WorkSplit> accumulated_work_trace(std::span<const PathPoint> path, double coupling) {
  std::vector<WorkSplit> trace;
  if (path.empty()) return trace;
  trace.reserve(path.size());
  trace.push_back({});
  const double omega_dot = omega_dot_of(path);
  if (omega_dot == 0.0) {
    trace.resize(path.size());
    return trace;
  }
  double fr_prev = power_friction(path[0].omega, omega_dot, coupling, path[0].b);
  double fi_prev = power_field(path[0].omega, omega_dot, coupling, path[0].b);
  WorkSplit acc;
  for (std::size_t k = 1; k < path.size(); ++k) {
    const double dt = path[k].t - path[k - 1].t;
    const double fr = power_friction(path[k].omega, omega_dot, coupling, path[k].b);
    const double fi = power_field(path[k].omega, omega_dot, coupling, path[k].b);
    acc.friction += 0.5 * dt * (fr + fr_prev);
    acc.field += 0.5 * dt * (fi + fi_prev);
    trace.push_back(acc);
    fr_prev = fr;
    fi_prev = fi;
  }
  return trace;
}

WorkSplit accumulate_works(std::span<const PathPoint> path, double coupling) {
  if (path.size() < 2) return {};
  return accumulated_work_trace(path, coupling).back();
}

}  // namespace qotto
