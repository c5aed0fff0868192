#pragma once

#include <array>
#include <cstdint>

namespace qotto {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). A 128-bit
// counter and a 64-bit key map to 128 random bits; there is no hidden state,
// so any (key, counter) pair can be evaluated independently.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter bijection(Counter counter, Key key);
};

// Stream addressed by (seed, cycle, branch, segment): one Philox block per
// address, giving two 53-bit uniforms.
class SubstreamRng {
 public:
  explicit SubstreamRng(std::uint64_t seed) noexcept;

  struct Uniforms {
    double first;   // in [0, 1)
    double second;  // in [0, 1)
  };

  Uniforms uniforms(std::uint64_t cycle, std::uint32_t branch, std::uint32_t segment) const noexcept;

  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
  Philox4x32::Key key_;
};

// Maps 64 random bits to a double in [0, 1) using the top 53 bits.
double to_unit_interval(std::uint64_t bits) noexcept;

}  // namespace qotto
