#pragma once

// Philox4x32-10 and the Box–Muller map shared by every kernel variant.
// The scalar functions here are the reference: SIMD code reproduces them
// operation for operation, so both paths give the same bits.

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <utility>

namespace sphtest::philox {

struct Key {
    std::uint32_t k0 = 0, k1 = 0;
};
using Block = std::array<std::uint32_t, 4>;

inline constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;

inline Block generate(Block c, Key k) {
    for (int r = 0; r < 10; ++r) {
        if (r) {
            k.k0 += kW0;
            k.k1 += kW1;
        }
        const std::uint64_t p0 = std::uint64_t{kM0} * c[0];
        const std::uint64_t p1 = std::uint64_t{kM1} * c[2];
        c = {std::uint32_t(p1 >> 32) ^ c[1] ^ k.k0, std::uint32_t(p1),
             std::uint32_t(p0 >> 32) ^ c[3] ^ k.k1, std::uint32_t(p0)};
    }
    return c;
}

inline Block counter(std::uint64_t block) {
    return {std::uint32_t(block), std::uint32_t(block >> 32), 0u, 0u};
}

// Top 52 bits of hi:lo as a double in [0,1).
inline double unit(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t m = ((std::uint64_t{hi} << 32) | lo) >> 12;
    return std::bit_cast<double>(m | 0x3FF0000000000000ull) - 1.0;
}

inline constexpr double kSqrt2 = 1.4142135623730951;
inline constexpr double kLn2Hi = 6.93147180369123816490e-01;
inline constexpr double kLn2Lo = 1.90821492927058770002e-10;
inline constexpr double kPiO2 = 1.5707963267948966;
inline constexpr double kTwo52 = 4503599627370496.0;

// 2·atanh(s)/s = Σ 2 z^k/(2k+1), z = s², |s| ≤ 3−2√2.
inline constexpr std::array<double, 12> kLogPoly = {
    2.0,       2.0 / 3,   2.0 / 5,   2.0 / 7,   2.0 / 9,   2.0 / 11,
    2.0 / 13,  2.0 / 15,  2.0 / 17,  2.0 / 19,  2.0 / 21,  2.0 / 23};

// Taylor coefficients on |r| ≤ π/4; index k holds (−1)^k/(2k+1)! and (−1)^k/(2k)!.
inline constexpr std::array<double, 10> kSinPoly = {
    1.0,
    -1.0 / 6,
    1.0 / 120,
    -1.0 / 5040,
    1.0 / 362880,
    -1.0 / 39916800,
    1.0 / 6227020800,
    -1.0 / 1307674368000,
    1.0 / 355687428096000,
    -1.0 / 121645100408832000};
inline constexpr std::array<double, 10> kCosPoly = {
    1.0,
    -1.0 / 2,
    1.0 / 24,
    -1.0 / 720,
    1.0 / 40320,
    -1.0 / 3628800,
    1.0 / 479001600,
    -1.0 / 87178291200,
    1.0 / 20922789888000,
    -1.0 / 6402373705728000};

// Natural log for u in (0,1], u a normal double.
inline double log_unit(double u) {
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(u);
    double e = std::bit_cast<double>((bits >> 52) | 0x4330000000000000ull) - kTwo52;
    e = e - 1023.0;
    double m = std::bit_cast<double>((bits & 0x000FFFFFFFFFFFFFull) | 0x3FF0000000000000ull);
    if (m > kSqrt2) {
        m = m * 0.5;
        e = e + 1.0;
    }
    const double s = (m - 1.0) / (m + 1.0);
    const double z = s * s;
    double q = kLogPoly[11];
    for (int k = 10; k >= 0; --k) q = std::fma(q, z, kLogPoly[k]);
    return std::fma(e, kLn2Hi, std::fma(e, kLn2Lo, s * q));
}

// (cos 2πu, sin 2πu) for u in [0,1).
inline std::pair<double, double> sincos_turn(double u) {
    const double w = u * 4.0;
    const double k = std::nearbyint(w);
    const double r = (w - k) * kPiO2;
    const double z = r * r;
    double qs = kSinPoly[9], qc = kCosPoly[9];
    for (int i = 8; i >= 1; --i) {
        qs = std::fma(qs, z, kSinPoly[i]);
        qc = std::fma(qc, z, kCosPoly[i]);
    }
    const double s = std::fma(r * z, qs, r);
    const double c = std::fma(z, qc, 1.0);
    const bool swap = k == 1.0 || k == 3.0;
    double cs = swap ? s : c;
    double sn = swap ? c : s;
    if (k == 1.0 || k == 2.0) cs = -cs;
    if (k == 2.0 || k == 3.0) sn = -sn;
    return {cs, sn};
}

inline std::pair<double, double> box_muller(const Block& w) {
    const double u1 = 1.0 - unit(w[0], w[1]);
    const double u2 = unit(w[2], w[3]);
    const double rad = std::sqrt(-2.0 * log_unit(u1));
    const auto [c, s] = sincos_turn(u2);
    return {rad * c, rad * s};
}

}  // namespace sphtest::philox
