#pragma once

#include "qotto/types.hpp"

namespace qotto {

// b -> M b + c. Every branch propagator of the engine has this form.
struct AffineMap {
  Matrix5 linear = Matrix5::Identity();
  Vector5 offset = Vector5::Zero();

  static AffineMap identity() { return {}; }

  BVector apply(const BVector& b) const { return linear * b + offset; }

  // Map that applies *this first and then `next`.
  AffineMap then(const AffineMap& next) const {
    return {next.linear * linear, next.linear * offset + next.offset};
  }
};

// Composition in operator order: (a * b)(x) = a(b(x)).
inline AffineMap operator*(const AffineMap& a, const AffineMap& b) { return b.then(a); }

// db/dt = G b + g.
struct AffineGenerator {
  Matrix5 linear = Matrix5::Zero();
  Vector5 offset = Vector5::Zero();

  BVector rate(const BVector& b) const { return linear * b + offset; }

  // Exact propagator over time t (augmented 6x6 matrix exponential).
  AffineMap exponentiate(double t) const;
};

inline AffineGenerator operator+(const AffineGenerator& a, const AffineGenerator& b) {
  return {a.linear + b.linear, a.offset + b.offset};
}

}  // namespace qotto
