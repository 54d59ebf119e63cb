#pragma once
// Counter-based RNG (Philox 4x32-10). Every draw is addressed by
// (seed, a, b, c), so sampled objects do not depend on traversal order or
// thread count. Axis conventions for the address fields are chosen per call
// site; the only global rule is that distinct logical draws use distinct
// addresses.

#include <array>
#include <cmath>
#include <cstdint>
#include <utility>

namespace hivelab {

inline std::array<std::uint32_t, 4> philox_block(std::array<std::uint32_t, 4> c,
                                                 std::array<std::uint32_t, 2> k) {
  constexpr std::uint32_t m0 = 0xD2511F53u, m1 = 0xCD9E8D57u;
  constexpr std::uint32_t w0 = 0x9E3779B9u, w1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t(m0) * c[0];
    const std::uint64_t p1 = std::uint64_t(m1) * c[2];
    c = {std::uint32_t(p1 >> 32) ^ c[1] ^ k[0], std::uint32_t(p1),
         std::uint32_t(p0 >> 32) ^ c[3] ^ k[1], std::uint32_t(p0)};
    k[0] += w0;
    k[1] += w1;
  }
  return c;
}

inline std::array<std::uint32_t, 4> philox_at(std::uint64_t seed, std::uint64_t a,
                                              std::uint32_t b, std::uint32_t c) {
  return philox_block({std::uint32_t(a), std::uint32_t(a >> 32), b, c},
                      {std::uint32_t(seed), std::uint32_t(seed >> 32)});
}

// uniform double in [0, 1) with 53 random bits
inline double uniform_at(std::uint64_t seed, std::uint64_t a, std::uint32_t b,
                         std::uint32_t c) {
  const auto r = philox_at(seed, a, b, c);
  const std::uint64_t hi = (std::uint64_t(r[0]) << 32) | r[1];
  return double(hi >> 11) * 0x1p-53;
}

// independent standard gaussian pair (Box-Muller); first uniform kept in (0,1]
inline std::pair<double, double> gaussian_pair_at(std::uint64_t seed, std::uint64_t a,
                                                  std::uint32_t b, std::uint32_t c) {
  const auto r = philox_at(seed, a, b, c);
  const double u1 = (double(r[0]) + 1.0) * 0x1p-32;
  const double u2 = double(r[1]) * 0x1p-32;
  const double rad = std::sqrt(-2.0 * std::log(u1));
  const double ang = 2.0 * 3.14159265358979323846 * u2;
  return {rad * std::cos(ang), rad * std::sin(ang)};
}

inline double gaussian_at(std::uint64_t seed, std::uint64_t a, std::uint32_t b,
                          std::uint32_t c) {
  return gaussian_pair_at(seed, a, b, c).first;
}

// unbiased enough for n well below 2^32 (bias ~ n / 2^64)
inline std::uint32_t uniform_below_at(std::uint32_t n, std::uint64_t seed,
                                      std::uint64_t a, std::uint32_t b,
                                      std::uint32_t c) {
  const auto r = philox_at(seed, a, b, c);
  const std::uint64_t hi = (std::uint64_t(r[0]) << 32) | r[1];
  return std::uint32_t((__uint128_t(hi) * n) >> 64);
}

}  // namespace hivelab
