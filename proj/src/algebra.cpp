#include "qotto/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "qotto/errors.hpp"

namespace qotto {

namespace {

using Matrix2c = Eigen::Matrix<cplx, 2, 2>;

Matrix4c kron(const Matrix2c& a, const Matrix2c& b) {
  Matrix4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

Matrix2c pauli_x() {
  Matrix2c m;
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

Matrix2c pauli_y() {
  Matrix2c m;
  m << 0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0;
  return m;
}

Matrix2c pauli_z() {
  Matrix2c m;
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

// Degenerate eigenvalues are grouped when closer than this (relative to the
// spectral scale).
constexpr double kDegeneracyTolerance = 1e-9;

}  // namespace

Matrix4c commutator(const Matrix4c& a, const Matrix4c& b) { return a * b - b * a; }

OperatorSet build_operator_set() {
  const Matrix2c sx = pauli_x();
  const Matrix2c sy = pauli_y();
  const Matrix2c sz = pauli_z();
  const Matrix2c id = Matrix2c::Identity();
  const double c = std::pow(2.0, -1.5);

  OperatorSet set;
  set.B[0] = c * (kron(sz, id) + kron(id, sz));
  set.B[1] = c * (kron(sx, sx) - kron(sy, sy));
  set.B[2] = c * (kron(sx, sy) + kron(sy, sx));
  set.B[3] = c * (kron(sz, id) - kron(id, sz));
  set.B[4] = 0.5 * kron(sz, sz);
  set.identity = Matrix4c::Identity();
  return set;
}

const OperatorSet& operators() {
  static const OperatorSet set = build_operator_set();
  return set;
}

Hamiltonian::Hamiltonian(double omega, double coupling)
    : omega_(omega),
      coupling_(coupling),
      scale_(std::hypot(omega, coupling)),
      matrix_(omega * operators()[0] + coupling * operators()[1]) {
  if (!std::isfinite(omega) || !std::isfinite(coupling))
    throw InvalidArgument("Hamiltonian parameters must be finite");
}

Hamiltonian hamiltonian(double omega, double coupling) { return Hamiltonian(omega, coupling); }

EnergySpectrum energy_eigensystem(const Hamiltonian& h) {
  Eigen::SelfAdjointEigenSolver<Matrix4c> solver(h.matrix());
  const Eigen::Vector4d ascending = solver.eigenvalues();
  const Matrix4c vecs = solver.eigenvectors();

  EnergySpectrum spectrum;
  for (int n = 0; n < 4; ++n) {
    spectrum.values[n] = ascending[3 - n];
    Vector4c v = vecs.col(3 - n);
    for (int i = 0; i < 4; ++i) {
      if (std::abs(v[i]) > 1e-12) {
        v *= std::conj(v[i]) / std::abs(v[i]);
        v[i] = std::abs(v[i]);
        break;
      }
    }
    spectrum.vectors.col(n) = v;
  }

  const double tol = kDegeneracyTolerance * std::max(1.0, h.scale());
  int n = 0;
  while (n < 4) {
    int m = n + 1;
    while (m < 4 && std::abs(spectrum.values[n] - spectrum.values[m]) < tol) ++m;
    EnergyLevel level;
    level.basis = spectrum.vectors.block(0, n, 4, m - n);
    double mean = 0.0;
    for (int k = n; k < m; ++k) mean += spectrum.values[k];
    level.energy = mean / (m - n);
    level.projector = level.basis * level.basis.adjoint();
    spectrum.levels.push_back(std::move(level));
    n = m;
  }
  return spectrum;
}

DensityState::DensityState(const Matrix4c& rho) : rho_(rho) {
  const double herm = (rho - rho.adjoint()).norm();
  if (herm > 1e-10)
    throw NonPhysicalState("density matrix is not Hermitian (residual " + std::to_string(herm) + ")");
  const cplx tr = rho.trace();
  if (std::abs(tr - 1.0) > 1e-10)
    throw NonPhysicalState("density matrix trace " + std::to_string(tr.real()) + " != 1");
  rho_ = 0.5 * (rho + rho.adjoint());
  const double lo = eigenvalues().minCoeff();
  if (lo < -kPositivityTolerance)
    throw NonPhysicalState("density matrix has eigenvalue " + std::to_string(lo));
}

Eigen::Vector4d DensityState::eigenvalues() const {
  return Eigen::SelfAdjointEigenSolver<Matrix4c>(rho_, Eigen::EigenvaluesOnly).eigenvalues();
}

Matrix4c density_matrix(const BVector& b) {
  const OperatorSet& ops = operators();
  Matrix4c rho = 0.25 * ops.identity;
  for (int k = 0; k < 5; ++k) rho += b[k] * ops[k];
  return rho;
}

DensityState state_from_b(const BVector& b) { return DensityState(density_matrix(b)); }

BVector b_from_state(const DensityState& state) {
  const OperatorSet& ops = operators();
  BVector b;
  for (int k = 0; k < 5; ++k) {
    const cplx value = (state.matrix() * ops[k]).trace();
    if (std::abs(value.imag()) > 1e-10)
      throw NonPhysicalState("imaginary expectation value for B" + std::to_string(k + 1));
    b[k] = value.real();
  }
  return b;
}

double min_eigenvalue(const BVector& b) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  // |uu>,|dd> block: (1/4 + b5/2) I + (b1 sz + b2 sx + b3 sy) / sqrt(2)
  const double outer = 0.25 + 0.5 * b[4] - inv_sqrt2 * std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]);
  // |ud>,|du> diagonal: 1/4 - b5/2 +- b4/sqrt(2)
  const double inner = 0.25 - 0.5 * b[4] - inv_sqrt2 * std::abs(b[3]);
  return std::min(outer, inner);
}

bool is_physical(const BVector& b, double tolerance) { return min_eigenvalue(b) >= -tolerance; }

DensityState gibbs_state(double omega, double coupling, double temperature) {
  if (!(temperature > 0.0) || !std::isfinite(temperature))
    throw InvalidTemperature("temperature must be positive and finite, got " + std::to_string(temperature));
  const EnergySpectrum spectrum = energy_eigensystem(hamiltonian(omega, coupling));
  const double ground = spectrum.values[3];
  Matrix4c rho = Matrix4c::Zero();
  double z = 0.0;
  for (const EnergyLevel& level : spectrum.levels) {
    const double w = std::exp(-(level.energy - ground) / temperature);
    rho += w * level.projector;
    z += w * static_cast<double>(level.basis.cols());
  }
  rho /= z;
  return DensityState(rho);
}

BVector gibbs_b(double omega, double coupling, double temperature) {
  return b_from_state(gibbs_state(omega, coupling, temperature));
}

AffineGenerator project_heisenberg(const std::function<Matrix4c(const Matrix4c&)>& heisenberg,
                                   double tolerance) {
  const OperatorSet& ops = operators();
  AffineGenerator gen;
  for (int i = 0; i < 5; ++i) {
    const Matrix4c image = heisenberg(ops[i]);
    Matrix4c rebuilt = (image.trace() / 4.0) * ops.identity;
    gen.offset[i] = (image.trace() / 4.0).real();
    for (int j = 0; j < 5; ++j) {
      const cplx coeff = (ops[j] * image).trace();
      gen.linear(i, j) = coeff.real();
      rebuilt += coeff * ops[j];
    }
    const double residual = (image - rebuilt).norm();
    if (residual > tolerance)
      throw ClosureViolation("image of B" + std::to_string(i + 1) + " leaves the algebra (residual " +
                             std::to_string(residual) + ")");
    double imag = std::abs((image.trace() / 4.0).imag());
    for (int j = 0; j < 5; ++j) imag = std::max(imag, std::abs((ops[j] * image).trace().imag()));
    if (imag > tolerance)
      throw ClosureViolation("projected generator has imaginary coefficients for B" + std::to_string(i + 1));
  }
  return gen;
}

}  // namespace qotto
