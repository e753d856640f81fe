// AVX2+FMA variant. Mirrors scalar.cpp and philox.hpp step for step.

#include <immintrin.h>

#include "sphtest/kernels.hpp"

namespace sphtest::kernels {

namespace {

double fold(__m256d acc) {
    alignas(32) double l[4];
    _mm256_store_pd(l, acc);
    return (l[0] + l[1]) + (l[2] + l[3]);
}

double sum_leaf(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    const std::size_t n4 = n & ~std::size_t{3};
    for (std::size_t i = 0; i < n4; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    double s = fold(acc);
    for (std::size_t i = n4; i < n; ++i) s += x[i];
    return s;
}

double dot_leaf(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    const std::size_t n4 = n & ~std::size_t{3};
    for (std::size_t i = 0; i < n4; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
    double s = fold(acc);
    for (std::size_t i = n4; i < n; ++i) s = _mm_cvtsd_f64(_mm_fmadd_sd(_mm_set_sd(x[i]), _mm_set_sd(y[i]), _mm_set_sd(s)));
    return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i)
        y[i] = _mm_cvtsd_f64(_mm_fmadd_sd(_mm_set_sd(a), _mm_set_sd(x[i]), _mm_set_sd(y[i])));
}

void scale(double a, double* x, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) x[i] = a * x[i];
}

// Four Philox blocks, one per 64-bit lane; each lane holds a 32-bit word.
struct Words {
    __m256i c0, c1, c2, c3;
};

Words philox4(philox::Key key, std::uint64_t first) {
    const __m256i lo32 = _mm256_set1_epi64x(0xFFFFFFFFll);
    Words w;
    w.c0 = _mm256_set_epi64x(std::uint32_t(first + 3), std::uint32_t(first + 2),
                             std::uint32_t(first + 1), std::uint32_t(first));
    w.c1 = _mm256_set_epi64x((first + 3) >> 32, (first + 2) >> 32, (first + 1) >> 32, first >> 32);
    w.c2 = _mm256_setzero_si256();
    w.c3 = _mm256_setzero_si256();
    const __m256i m0 = _mm256_set1_epi64x(philox::kM0);
    const __m256i m1 = _mm256_set1_epi64x(philox::kM1);
    std::uint32_t k0 = key.k0, k1 = key.k1;
    for (int r = 0; r < 10; ++r) {
        if (r) {
            k0 += philox::kW0;
            k1 += philox::kW1;
        }
        const __m256i p0 = _mm256_mul_epu32(w.c0, m0);
        const __m256i p1 = _mm256_mul_epu32(w.c2, m1);
        const __m256i vk0 = _mm256_set1_epi64x(k0), vk1 = _mm256_set1_epi64x(k1);
        const __m256i n0 = _mm256_xor_si256(_mm256_xor_si256(_mm256_srli_epi64(p1, 32), w.c1), vk0);
        const __m256i n2 = _mm256_xor_si256(_mm256_xor_si256(_mm256_srli_epi64(p0, 32), w.c3), vk1);
        w.c1 = _mm256_and_si256(p1, lo32);
        w.c3 = _mm256_and_si256(p0, lo32);
        w.c0 = n0;
        w.c2 = n2;
    }
    return w;
}

__m256d unit(__m256i hi, __m256i lo) {
    const __m256i m = _mm256_srli_epi64(_mm256_or_si256(_mm256_slli_epi64(hi, 32), lo), 12);
    const __m256i one = _mm256_set1_epi64x(0x3FF0000000000000ll);
    return _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(m, one)), _mm256_set1_pd(1.0));
}

__m256d log_unit(__m256d u) {
    const __m256i bits = _mm256_castpd_si256(u);
    const __m256i ebits = _mm256_or_si256(_mm256_srli_epi64(bits, 52), _mm256_set1_epi64x(0x4330000000000000ll));
    __m256d e = _mm256_sub_pd(_mm256_castsi256_pd(ebits), _mm256_set1_pd(philox::kTwo52));
    e = _mm256_sub_pd(e, _mm256_set1_pd(1023.0));
    __m256d m = _mm256_castsi256_pd(_mm256_or_si256(
        _mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFll)),
        _mm256_set1_epi64x(0x3FF0000000000000ll)));
    const __m256d big = _mm256_cmp_pd(m, _mm256_set1_pd(philox::kSqrt2), _CMP_GT_OQ);
    m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
    e = _mm256_add_pd(e, _mm256_and_pd(big, _mm256_set1_pd(1.0)));
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d s = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
    const __m256d z = _mm256_mul_pd(s, s);
    __m256d q = _mm256_set1_pd(philox::kLogPoly[11]);
    for (int k = 10; k >= 0; --k) q = _mm256_fmadd_pd(q, z, _mm256_set1_pd(philox::kLogPoly[k]));
    const __m256d t = _mm256_fmadd_pd(e, _mm256_set1_pd(philox::kLn2Lo), _mm256_mul_pd(s, q));
    return _mm256_fmadd_pd(e, _mm256_set1_pd(philox::kLn2Hi), t);
}

void sincos_turn(__m256d u, __m256d& cs, __m256d& sn) {
    const __m256d w = _mm256_mul_pd(u, _mm256_set1_pd(4.0));
    const __m256d k = _mm256_round_pd(w, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    const __m256d r = _mm256_mul_pd(_mm256_sub_pd(w, k), _mm256_set1_pd(philox::kPiO2));
    const __m256d z = _mm256_mul_pd(r, r);
    __m256d qs = _mm256_set1_pd(philox::kSinPoly[9]), qc = _mm256_set1_pd(philox::kCosPoly[9]);
    for (int i = 8; i >= 1; --i) {
        qs = _mm256_fmadd_pd(qs, z, _mm256_set1_pd(philox::kSinPoly[i]));
        qc = _mm256_fmadd_pd(qc, z, _mm256_set1_pd(philox::kCosPoly[i]));
    }
    const __m256d s = _mm256_fmadd_pd(_mm256_mul_pd(r, z), qs, r);
    const __m256d c = _mm256_fmadd_pd(z, qc, _mm256_set1_pd(1.0));
    const __m256d k1 = _mm256_cmp_pd(k, _mm256_set1_pd(1.0), _CMP_EQ_OQ);
    const __m256d k2 = _mm256_cmp_pd(k, _mm256_set1_pd(2.0), _CMP_EQ_OQ);
    const __m256d k3 = _mm256_cmp_pd(k, _mm256_set1_pd(3.0), _CMP_EQ_OQ);
    const __m256d swap = _mm256_or_pd(k1, k3);
    const __m256d sign = _mm256_set1_pd(-0.0);
    cs = _mm256_blendv_pd(c, s, swap);
    sn = _mm256_blendv_pd(s, c, swap);
    cs = _mm256_xor_pd(cs, _mm256_and_pd(_mm256_or_pd(k1, k2), sign));
    sn = _mm256_xor_pd(sn, _mm256_and_pd(_mm256_or_pd(k2, k3), sign));
}

void normals(philox::Key key, std::uint64_t first, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8, first += 4) {
        const Words w = philox4(key, first);
        const __m256d u1 = _mm256_sub_pd(_mm256_set1_pd(1.0), unit(w.c0, w.c1));
        const __m256d u2 = unit(w.c2, w.c3);
        const __m256d rad = _mm256_sqrt_pd(_mm256_mul_pd(_mm256_set1_pd(-2.0), log_unit(u1)));
        __m256d c, s;
        sincos_turn(u2, c, s);
        const __m256d z0 = _mm256_mul_pd(rad, c), z1 = _mm256_mul_pd(rad, s);
        const __m256d lo = _mm256_unpacklo_pd(z0, z1), hi = _mm256_unpackhi_pd(z0, z1);
        _mm256_storeu_pd(out + i, _mm256_permute2f128_pd(lo, hi, 0x20));
        _mm256_storeu_pd(out + i + 4, _mm256_permute2f128_pd(lo, hi, 0x31));
    }
    if (i < n) scalar_table().normals(key, first, out + i, n - i);
}

}  // namespace

const Table* avx2_table() {
    static const Table t{"avx2", sum_leaf, dot_leaf, axpy, scale, normals};
    static const bool ok = [] {
        __builtin_cpu_init();
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    }();
    return ok ? &t : nullptr;
}

}  // namespace sphtest::kernels
