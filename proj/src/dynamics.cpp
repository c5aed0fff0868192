#include "qotto/dynamics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "qotto/algebra.hpp"
#include "qotto/errors.hpp"

namespace qotto {

namespace {

struct UnitaryBasis {
  Matrix5 field;     // projected i[B1, .]
  Matrix5 coupling;  // projected i[B2, .]
};

const UnitaryBasis& unitary_basis() {
  static const UnitaryBasis basis = [] {
    const OperatorSet& ops = operators();
    const cplx i(0.0, 1.0);
    UnitaryBasis out;
    out.field = project_heisenberg([&](const Matrix4c& x) { return Matrix4c(i * commutator(ops[0], x)); }).linear;
    out.coupling = project_heisenberg([&](const Matrix4c& x) { return Matrix4c(i * commutator(ops[1], x)); }).linear;
    return out;
  }();
  return basis;
}

constexpr double kPathPositivityTolerance = 1e-8;

void check_positive(const BVector& b, double t) {
  const double lo = min_eigenvalue(b);
  if (lo < -kPathPositivityTolerance)
    throw NonPhysicalState("state lost positivity (eigenvalue " + std::to_string(lo) + ") at t = " +
                           std::to_string(t));
}

}  // namespace

AffineMap AffineGenerator::exponentiate(double t) const {
  if (t == 0.0) return AffineMap::identity();
  Eigen::Matrix<double, 6, 6> aug = Eigen::Matrix<double, 6, 6>::Zero();
  aug.topLeftCorner<5, 5>() = linear * t;
  aug.topRightCorner<5, 1>() = offset * t;
  const Eigen::Matrix<double, 6, 6> e = aug.exp();
  return {e.topLeftCorner<5, 5>(), e.topRightCorner<5, 1>()};
}

void AdiabatParams::validate() const {
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw InvalidArgument("adiabat duration must be >= 0");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidArgument("adiabat Lambda must be >= 0");
  if (segments < 1) throw InvalidArgument("adiabat needs at least one segment");
  if (!std::isfinite(omega_start) || !std::isfinite(omega_end))
    throw InvalidArgument("adiabat field values must be finite");
}

double AdiabatParams::omega_at(double t) const {
  if (tau == 0.0) return omega_end;
  return omega_start + (omega_end - omega_start) * t / tau;
}

double AdiabatParams::segment_omega(int k) const {
  const double offset = ladder == OmegaLadder::midpoint ? 0.5 : 1.0;
  return omega_start + (omega_end - omega_start) * (k + offset) / segments;
}

void IsochoreParams::validate() const {
  if (!(temperature > 0.0) || !std::isfinite(temperature))
    throw InvalidTemperature("bath temperature must be positive, got " + std::to_string(temperature));
  if (!(relaxation_rate >= 0.0) || !std::isfinite(relaxation_rate))
    throw InvalidArgument("relaxation rate Gamma must be >= 0");
  if (!std::isfinite(pure_dephasing)) throw InvalidArgument("pure dephasing must be finite");
}

Matrix5 unitary_generator(double omega, double coupling) {
  const UnitaryBasis& basis = unitary_basis();
  return omega * basis.field + coupling * basis.coupling;
}

Matrix5 dephasing_generator(double omega, double coupling) {
  const Matrix5 a = unitary_generator(omega, coupling);
  return a * a;
}

Matrix5 segment_map(double omega, double coupling, double lambda, double dt) {
  const Matrix5 a = unitary_generator(omega, coupling);
  const double theta = std::sqrt(0.5 * a.squaredNorm());
  if (theta == 0.0) return Matrix5::Identity();
  // A = theta K with K^3 = -K; (I + K^2) projects on the rotation axis, which
  // both the rotation and the dephasing leave untouched.
  const Matrix5 k = a / theta;
  const Matrix5 k2 = k * k;
  const double phase = theta * dt;
  const double damping = lambda == 0.0 ? 1.0 : std::exp(-lambda * theta * theta * dt);
  return Matrix5::Identity() + k2 + damping * (std::sin(phase) * k - std::cos(phase) * k2);
}

AffineMap adiabat_map(const AdiabatParams& params, double coupling) {
  params.validate();
  AffineMap map;
  if (params.tau == 0.0) return map;
  const double dt = params.tau / params.segments;
  for (int k = 0; k < params.segments; ++k)
    map.linear = segment_map(params.segment_omega(k), coupling, params.lambda, dt) * map.linear;
  return map;
}

Propagation adiabat_propagate(const AdiabatParams& params, double coupling, const BVector& b0,
                              bool record_path) {
  params.validate();
  Propagation out;
  BVector b = b0;
  check_positive(b, 0.0);
  if (record_path) out.path.push_back({0.0, params.omega_start, b});
  if (params.tau == 0.0) {
    out.final = b;
    if (record_path) out.path.push_back({0.0, params.omega_end, b});
    return out;
  }
  const double dt = params.tau / params.segments;
  for (int k = 0; k < params.segments; ++k) {
    const Matrix5 step = segment_map(params.segment_omega(k), coupling, params.lambda, dt);
    out.map.linear = step * out.map.linear;
    b = step * b;
    const double t = (k + 1) * dt;
    check_positive(b, t);
    if (record_path) out.path.push_back({t, params.omega_at(t), b});
  }
  out.final = b;
  return out;
}

std::vector<JumpOperator> thermal_jump_operators(const IsochoreParams& params, double coupling) {
  params.validate();
  const EnergySpectrum spectrum = energy_eigensystem(hamiltonian(params.omega, coupling));
  std::array<double, 4> pop{};
  double z = 0.0;
  for (int n = 0; n < 4; ++n) {
    pop[n] = std::exp(-(spectrum.values[n] - spectrum.values[3]) / params.temperature);
    z += pop[n];
  }
  for (double& p : pop) p /= z;

  std::vector<JumpOperator> jumps;
  if (params.relaxation_rate == 0.0) return jumps;
  jumps.reserve(16);
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n)
      jumps.push_back({spectrum.vectors.col(m) * spectrum.vectors.col(n).adjoint(),
                       params.relaxation_rate * pop[m]});
  return jumps;
}

AffineGenerator isochore_dissipator(const IsochoreParams& params, double coupling) {
  params.validate();
  const std::vector<JumpOperator> jumps = thermal_jump_operators(params, coupling);
  const Matrix4c h = hamiltonian(params.omega, coupling).matrix();
  const double gamma = std::abs(params.pure_dephasing);
  return project_heisenberg([&](const Matrix4c& x) {
    Matrix4c out = Matrix4c::Zero();
    for (const JumpOperator& j : jumps) {
      const Matrix4c ld = j.op.adjoint();
      const Matrix4c ldl = ld * j.op;
      out += j.rate * (ld * x * j.op - 0.5 * (ldl * x + x * ldl));
    }
    if (gamma > 0.0) out -= gamma * commutator(h, commutator(h, x));
    return out;
  });
}

AffineGenerator isochore_generator(const IsochoreParams& params, double coupling) {
  AffineGenerator gen = isochore_dissipator(params, coupling);
  gen.linear += unitary_generator(params.omega, coupling);
  return gen;
}

Propagation isochore_propagate(const IsochoreParams& params, double coupling, double tau, const BVector& b0,
                               int samples) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw InvalidArgument("isochore duration must be >= 0");
  const AffineGenerator gen = isochore_generator(params, coupling);
  Propagation out;
  out.map = gen.exponentiate(tau);
  out.final = out.map.apply(b0);
  if (samples > 0) {
    const AffineMap step = gen.exponentiate(tau / samples);
    BVector b = b0;
    out.path.reserve(samples + 1);
    out.path.push_back({0.0, params.omega, b});
    for (int s = 1; s <= samples; ++s) {
      b = step.apply(b);
      out.path.push_back({tau * s / samples, params.omega, b});
    }
    out.path.back().b = out.final;
  }
  return out;
}

DephasingTimes dephasing_times(const IsochoreParams& params, double coupling) {
  params.validate();
  const double gamma = std::abs(params.pure_dephasing);
  if (params.relaxation_rate == 0.0 && gamma == 0.0)
    throw UndefinedTimescale("both Gamma and gamma vanish; relaxation times are undefined");
  const double inf = std::numeric_limits<double>::infinity();
  const double scale = std::hypot(params.omega, coupling);

  DephasingTimes times;
  times.t1 = params.relaxation_rate > 0.0 ? 1.0 / params.relaxation_rate : inf;
  times.t2_star = gamma > 0.0 && scale > 0.0 ? 1.0 / (2.0 * gamma * scale * scale) : inf;

  // Coherences between the two non-degenerate levels oscillate at the gap
  // frequency; their eigenvalue is the complex pair of the generator.
  const AffineGenerator gen = isochore_generator(params, coupling);
  Eigen::EigenSolver<Matrix5> solver(gen.linear);
  double decay = -1.0;
  double best_imag = 0.0;
  for (int k = 0; k < 5; ++k) {
    const std::complex<double> ev = solver.eigenvalues()[k];
    if (std::abs(ev.imag()) > best_imag + 1e-12) {
      best_imag = std::abs(ev.imag());
      decay = -ev.real();
    }
  }
  if (decay < 0.0) decay = params.relaxation_rate + 2.0 * gamma * scale * scale;
  times.t2 = decay > 0.0 ? 1.0 / decay : inf;
  return times;
}

}  // namespace qotto
