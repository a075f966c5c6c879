#pragma once

// Counter-based random number generation (Philox 4x32-10).
//
// Every variate is a pure function of (master seed, stream index, counter),
// so sampling is reproducible bit-for-bit regardless of evaluation order or
// the number of worker threads. Multiplier and Weyl constants follow Salmon,
// Moraes, Dror, Shaw, "Parallel random numbers: as easy as 1, 2, 3" (SC'11).

#include <array>
#include <cstdint>

namespace zarc::rng {

namespace detail {

inline constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
inline constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
inline constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

} // namespace detail

using Counter4 = std::array<std::uint32_t, 4>;

inline Counter4 philox4x32(Counter4 ctr, std::uint32_t k0, std::uint32_t k1) {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        detail::mulhilo(detail::kPhiloxM0, ctr[0], hi0, lo0);
        detail::mulhilo(detail::kPhiloxM1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ k0, lo1, hi0 ^ ctr[3] ^ k1, lo0};
        k0 += detail::kWeyl0;
        k1 += detail::kWeyl1;
    }
    return ctr;
}

// 53-bit uniform in [0, 1) keyed by (seed, stream, counter).
inline double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    const Counter4 in = {static_cast<std::uint32_t>(stream),
                         static_cast<std::uint32_t>(stream >> 32),
                         static_cast<std::uint32_t>(counter),
                         static_cast<std::uint32_t>(counter >> 32)};
    const Counter4 out = philox4x32(in, static_cast<std::uint32_t>(seed),
                                    static_cast<std::uint32_t>(seed >> 32));
    const std::uint64_t bits =
        (static_cast<std::uint64_t>(out[0]) << 32) | static_cast<std::uint64_t>(out[1]);
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Uniform in [-w, w). Used with w = pi for the phase vectors.
inline double uniform_symmetric(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter,
                                double w) {
    return (2.0 * uniform01(seed, stream, counter) - 1.0) * w;
}

} // namespace zarc::rng
