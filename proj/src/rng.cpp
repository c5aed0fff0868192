#include "qotto/rng.hpp"

namespace qotto {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
constexpr int kRounds = 10;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

Philox4x32::Counter Philox4x32::bijection(Counter ctr, Key key) {
  for (int r = 0; r < kRounds; ++r) {
    if (r > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

double to_unit_interval(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

SubstreamRng::SubstreamRng(std::uint64_t seed) noexcept
    : seed_(seed), key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

SubstreamRng::Uniforms SubstreamRng::uniforms(std::uint64_t cycle, std::uint32_t branch,
                                              std::uint32_t segment) const noexcept {
  const Philox4x32::Counter out = Philox4x32::bijection(
      {segment, branch, static_cast<std::uint32_t>(cycle), static_cast<std::uint32_t>(cycle >> 32)}, key_);
  const std::uint64_t a = (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
  const std::uint64_t b = (static_cast<std::uint64_t>(out[2]) << 32) | out[3];
  return {to_unit_interval(a), to_unit_interval(b)};
}

}  // namespace qotto
