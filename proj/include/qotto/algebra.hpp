#pragma once

#include <array>
#include <functional>
#include <vector>

#include "qotto/affine.hpp"
#include "qotto/types.hpp"

namespace qotto {

// The five traceless, trace-orthonormal Hermitian operators of the two-spin
// working medium plus the identity.
//
//   B1 = 2^{-3/2} (sz x I + I x sz)        external field
//   B2 = 2^{-3/2} (sx x sx - sy x sy)      interaction
//   B3 = 2^{-3/2} (sx x sy + sy x sx)      [B1, B2] = sqrt(2) i B3
//   B4 = 2^{-3/2} (sz x I - I x sz)
//   B5 = 1/2 sz x sz
//
// Basis ordering of the 4x4 matrices is |uu>, |ud>, |du>, |dd>.
struct OperatorSet {
  std::array<Matrix4c, 5> B;
  Matrix4c identity = Matrix4c::Identity();

  const Matrix4c& operator[](std::size_t k) const { return B[k]; }
};

OperatorSet build_operator_set();

// Process-wide immutable instance of build_operator_set().
const OperatorSet& operators();

class Hamiltonian {
 public:
  Hamiltonian(double omega, double coupling);

  double omega() const noexcept { return omega_; }
  double coupling() const noexcept { return coupling_; }
  // Omega = sqrt(omega^2 + J^2).
  double scale() const noexcept { return scale_; }
  const Matrix4c& matrix() const noexcept { return matrix_; }

 private:
  double omega_;
  double coupling_;
  double scale_;
  Matrix4c matrix_;
};

Hamiltonian hamiltonian(double omega, double coupling);

// One (possibly degenerate) energy level.
struct EnergyLevel {
  double energy = 0.0;
  Eigen::MatrixXcd basis;  // 4 x multiplicity, orthonormal columns
  Matrix4c projector;
};

struct EnergySpectrum {
  std::array<double, 4> values{};  // descending
  Matrix4c vectors;                // column n belongs to values[n]
  std::vector<EnergyLevel> levels; // grouped degenerate subspaces, descending
};

// Dense diagonalization; eigenvectors carry the phase convention "first
// component with modulus > 1e-12 is real positive".
EnergySpectrum energy_eigensystem(const Hamiltonian& h);

// Validated density matrix: Hermitian, unit trace, eigenvalues >= -1e-9.
class DensityState {
 public:
  explicit DensityState(const Matrix4c& rho);

  const Matrix4c& matrix() const noexcept { return rho_; }
  Eigen::Vector4d eigenvalues() const;

 private:
  Matrix4c rho_;
};

inline constexpr double kPositivityTolerance = 1e-9;

// rho = I/4 + sum_k b_k B_k. Throws NonPhysicalState if rho is not PSD.
DensityState state_from_b(const BVector& b);
// Same matrix without validation.
Matrix4c density_matrix(const BVector& b);
// b_k = tr(rho B_k). Throws NonPhysicalState on an imaginary residue > 1e-10.
BVector b_from_state(const DensityState& rho);

// Smallest eigenvalue of I/4 + sum b_k B_k, in closed form (the matrix is
// block diagonal: a 2x2 block on |uu>,|dd> and a diagonal pair on |ud>,|du>).
double min_eigenvalue(const BVector& b);
bool is_physical(const BVector& b, double tolerance = kPositivityTolerance);

DensityState gibbs_state(double omega, double coupling, double temperature);
BVector gibbs_b(double omega, double coupling, double temperature);

// <H> = omega b1 + J b2.
inline double energy(const BVector& b, double omega, double coupling) {
  return omega * b[0] + coupling * b[1];
}

// Projects a Heisenberg-picture superoperator X -> L*(X) onto the algebra:
// db_i/dt = sum_j G_ij b_j + g_i with G_ij = tr(B_j L*(B_i)), g_i = tr(L*(B_i))/4.
// Throws ClosureViolation if some L*(B_i) leaves span{I, B_1..B_5} by more
// than `tolerance` (Frobenius norm).
AffineGenerator project_heisenberg(const std::function<Matrix4c(const Matrix4c&)>& heisenberg,
                                   double tolerance = 1e-10);

Matrix4c commutator(const Matrix4c& a, const Matrix4c& b);

}  // namespace qotto
