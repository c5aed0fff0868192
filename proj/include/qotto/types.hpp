#pragma once

#include <complex>

#include <Eigen/Dense>

namespace qotto {

using cplx = std::complex<double>;

using Matrix4c = Eigen::Matrix<cplx, 4, 4>;
using Vector4c = Eigen::Matrix<cplx, 4, 1>;
using Matrix5 = Eigen::Matrix<double, 5, 5>;
using Vector5 = Eigen::Matrix<double, 5, 1>;

// Expectation values b_k = <B_k>, k = 1..5 (stored 0-based).
using BVector = Vector5;

// Hilbert-space dimension of the two-spin working medium.
inline constexpr int kDim = 4;

}  // namespace qotto
