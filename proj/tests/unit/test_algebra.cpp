#include <cmath>
#include <random>

#include "doctest.h"
#include "qotto/algebra.hpp"
#include "qotto/errors.hpp"
#include "support/oracle.hpp"

using namespace qotto;

namespace {

BVector random_physical_b(std::mt19937_64& rng) { return oracle::expectations(oracle::random_state(rng)); }

}  // namespace

TEST_SUITE("algebra") {
  TEST_CASE("operators match an independent Pauli construction") {
    const auto ref = oracle::basis();
    for (int k = 0; k < 5; ++k) CHECK((operators()[k] - ref[k]).norm() < 1e-15);
  }

  TEST_CASE("trace orthonormal, traceless, Hermitian") {
    const auto& b = operators();
    for (int i = 0; i < 5; ++i) {
      CHECK(std::abs(b[i].trace()) < 1e-15);
      CHECK((b[i] - b[i].adjoint()).norm() < 1e-15);
      for (int j = 0; j < 5; ++j) CHECK(std::abs((b[i] * b[j]).trace() - (i == j ? 1.0 : 0.0)) < 1e-14);
    }
  }

  TEST_CASE("commutation relations of the field and interaction") {
    const auto& b = operators();
    const cplx i(0.0, 1.0);
    CHECK((commutator(b[0], b[1]) - std::sqrt(2.0) * i * b[2]).norm() < 1e-14);
    CHECK((commutator(b[1], b[2]) - std::sqrt(2.0) * i * b[0]).norm() < 1e-14);
    CHECK((commutator(b[2], b[0]) - std::sqrt(2.0) * i * b[1]).norm() < 1e-14);
    const Hamiltonian h(3.7, -1.3);
    CHECK(commutator(h.matrix(), b[3]).norm() < 1e-14);
    CHECK(commutator(h.matrix(), b[4]).norm() < 1e-14);
  }

  TEST_CASE("the alternative sx sx + sy sy form does not close the algebra") {
    const double c = std::pow(2.0, -1.5);
    const auto x = oracle::pauli('x'), y = oracle::pauli('y');
    const oracle::M4 alt = c * (oracle::kron(x, x) + oracle::kron(y, y));
    const cplx i(0.0, 1.0);
    CHECK((commutator(operators()[0], operators()[1]) - std::sqrt(2.0) * i * alt).norm() > 0.1);
  }

  TEST_CASE("Hamiltonian scale and spectrum") {
    const Hamiltonian h(5.08364, 2.0);
    CHECK(h.scale() == doctest::Approx(std::hypot(5.08364, 2.0)).epsilon(1e-15));
    const EnergySpectrum s = energy_eigensystem(h);
    // Levels +-Omega/sqrt(2) on the |uu>,|dd> block, twice 0 on |ud>,|du>.
    const double e = h.scale() / std::sqrt(2.0);
    CHECK(s.values[0] == doctest::Approx(e));
    CHECK(std::abs(s.values[1]) < 1e-12);
    CHECK(std::abs(s.values[2]) < 1e-12);
    CHECK(s.values[3] == doctest::Approx(-e));
    CHECK(s.levels.size() == 3);
    CHECK(s.levels[1].basis.cols() == 2);
    Matrix4c sum = Matrix4c::Zero();
    for (const auto& l : s.levels) sum += l.projector;
    CHECK((sum - Matrix4c::Identity()).norm() < 1e-12);
    for (int n = 0; n < 4; ++n)
      CHECK((h.matrix() * s.vectors.col(n) - s.values[n] * s.vectors.col(n)).norm() < 1e-12);
  }

  TEST_CASE("closed-form minimum eigenvalue agrees with dense diagonalization") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-0.6, 0.6);
    for (int trial = 0; trial < 200; ++trial) {
      BVector b;
      for (int k = 0; k < 5; ++k) b[k] = u(rng);
      Eigen::SelfAdjointEigenSolver<Matrix4c> es(density_matrix(b));
      CHECK(min_eigenvalue(b) == doctest::Approx(es.eigenvalues().minCoeff()).epsilon(1e-12));
    }
  }

  TEST_CASE("b-vector round trip through the density matrix") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
      const BVector b = random_physical_b(rng);
      const BVector back = b_from_state(state_from_b(b));
      CHECK((back - b).norm() < 1e-14);
      CHECK(is_physical(b));
    }
  }

  TEST_CASE("non-physical vectors are rejected") {
    BVector b = BVector::Zero();
    b[0] = 1.0;
    CHECK_FALSE(is_physical(b));
    CHECK_THROWS_AS(state_from_b(b), NonPhysicalState);
    Matrix4c bad = Matrix4c::Identity() / 4.0;
    bad(0, 1) = cplx(0.0, 0.1);
    CHECK_THROWS_AS(DensityState{bad}, NonPhysicalState);
  }

  TEST_CASE("Gibbs state matches the matrix exponential") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> w(0.5, 15.0), j(-3.0, 3.0), t(0.2, 10.0);
    for (int trial = 0; trial < 20; ++trial) {
      const double omega = w(rng), coupling = j(rng), temp = t(rng);
      const BVector ref = oracle::expectations(oracle::gibbs(omega, coupling, temp));
      CHECK((gibbs_b(omega, coupling, temp) - ref).norm() < 1e-12);
    }
    CHECK_THROWS_AS(gibbs_b(5.0, 2.0, 0.0), InvalidTemperature);
    CHECK_THROWS_AS(gibbs_b(5.0, 2.0, -1.0), InvalidTemperature);
  }

  TEST_CASE("Heisenberg projection of i[H, .] and closure violation") {
    const Hamiltonian h(4.0, 1.5);
    const AffineGenerator g = project_heisenberg(
        [&](const Matrix4c& x) { return Matrix4c(cplx(0.0, 1.0) * commutator(h.matrix(), x)); });
    CHECK(g.offset.norm() < 1e-15);
    CHECK((g.linear + g.linear.transpose()).norm() < 1e-14);
    const Matrix4c sx_i = oracle::kron(oracle::pauli('x'), oracle::pauli('1'));
    CHECK_THROWS_AS(project_heisenberg([&](const Matrix4c& x) { return Matrix4c(commutator(sx_i, x)); }),
                    ClosureViolation);
  }
}
