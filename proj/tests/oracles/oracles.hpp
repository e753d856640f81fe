#pragma once
// Independent reference computations used only by the tests. Nothing here
// calls into the library; every route is different from the one it checks.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

namespace oracle {

using ld = long double;

// log ∫_{-1}^{1} (1−t²)^a e^{x t} dt by tanh-sinh quadrature, everything in
// log space so x up to ~1e6 and a up to ~1e3 stay finite.
inline ld log_weighted_integral_fixed(ld a, ld x, ld h, ld umax = 7.0L) {
    const ld half_pi = std::numbers::pi_v<ld> / 2;
    std::vector<ld> logs;
    logs.reserve(std::size_t(2 * umax / h) + 2);
    for (ld u = -umax; u <= umax + h / 2; u += h) {
        const ld g = half_pi * std::sinh(u);
        const ld ag = std::fabs(g);
        // log cosh g, 1 − |t|, log(1−t²) without cancellation
        const ld e = std::exp(-2 * ag);
        const ld log_cosh = ag + std::log1p(e) - std::numbers::ln2_v<ld>;
        const ld one_minus_abs_t = 2 * e / (1 + e);
        const ld log_1mt2 = -2 * log_cosh;
        const ld xt = g >= 0 ? x - x * one_minus_abs_t : -x + x * one_minus_abs_t;
        // dt/du = (π/2) cosh(u) (1 − t²)
        const ld lw = std::log(half_pi * std::cosh(u)) + log_1mt2;
        logs.push_back(a * log_1mt2 + xt + lw);
    }
    const ld mx = *std::max_element(logs.begin(), logs.end());
    ld s = 0;
    for (ld v : logs) s += std::exp(v - mx);
    return mx + std::log(s * h);
}

// Halves the step until two successive levels agree.
inline ld log_weighted_integral(ld a, ld x) {
    ld h = 1.0L / 64;
    ld prev = log_weighted_integral_fixed(a, x, h);
    while (h > 1.0L / 32768) {
        h /= 2;
        const ld cur = log_weighted_integral_fixed(a, x, h);
        if (std::fabs(cur - prev) <= 1e-17L * std::max(ld(1), std::fabs(cur))) return cur;
        prev = cur;
    }
    return prev;
}

// log B(½, a+1) = log ∫(1−t²)^a dt
inline ld log_beta_half(ld a) { return std::lgamma(0.5L) + std::lgamma(a + 1) - std::lgamma(a + 1.5L); }

// log H_ν(x) = log[∫(1−t²)^{ν−½}e^{xt}dt / ∫(1−t²)^{ν−½}dt]
inline ld log_H_quad(ld nu, ld x) { return log_weighted_integral(nu - 0.5L, x) - log_beta_half(nu - 0.5L); }

// log H_ν(x) from the 0F1 series Σ (x²/4)^m / (m! (ν+1)_m) in long double.
inline ld log_H_series(ld nu, ld x) {
    const ld q = x * x / 4;
    ld term = 1, tail = 0;
    for (int m = 1; m < 100000; ++m) {
        term *= q / (ld(m) * (nu + m));
        tail += term;
        if (term < (1 + tail) * 1e-21L && term < tail * 1e-21L) break;
    }
    return std::log1p(tail);
}

// log c_{p,κ} = −log ∫(1−t²)^{(p−3)/2} e^{κt} dt
inline ld log_c_quad(int p, ld kappa) { return -log_weighted_integral((p - 3) / 2.0L, kappa); }

// I_{ν+1}(z)/I_ν(z) from the Gauss continued fraction 1/(2(ν+1)/z + 1/(2(ν+2)/z + …)),
// evaluated bottom-up and deepened until two depths agree to 1e-14.
inline ld bessel_ratio_cf(ld nu, ld z) {
    auto eval = [&](long depth) {
        ld r = 0;
        for (long k = depth; k >= 1; --k) r = 1 / (2 * (nu + k) / z + r);
        return r;
    };
    long depth = long(z + nu) + 64;
    ld prev = eval(depth);
    for (int it = 0; it < 30; ++it) {
        depth *= 2;
        const ld cur = eval(depth);
        if (std::fabs(cur - prev) <= 1e-14L * std::fabs(cur)) return cur;
        prev = cur;
    }
    return prev;
}

// The same ratio from the two power series, for moderate z.
inline ld bessel_ratio_series(ld nu, ld z) {
    auto f01 = [&](ld b) {
        const ld q = z * z / 4;
        ld term = 1, sum = 1;
        for (int m = 1; m < 100000; ++m) {
            term *= q / (ld(m) * (b + m - 1));
            sum += term;
            if (term < sum * 1e-22L) break;
        }
        return sum;
    };
    return (z / 2) / (nu + 1) * f01(nu + 2) / f01(nu + 1);
}

// Gauss–Legendre nodes and weights on [−1, 1].
inline std::pair<std::vector<ld>, std::vector<ld>> gauss_legendre(int n) {
    std::vector<ld> x(n), w(n);
    for (int i = 0; i < n; ++i) {
        ld r = std::cos(std::numbers::pi_v<ld> * (i + 0.75L) / (n + 0.5L));
        for (int it = 0; it < 100; ++it) {
            ld p0 = 1, p1 = r;
            for (int k = 2; k <= n; ++k) {
                const ld p2 = ((2 * k - 1) * r * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const ld dp = n * (r * p1 - p0) / (r * r - 1);
            const ld dr = p1 / dp;
            r -= dr;
            if (std::fabs(dr) < 1e-19L) break;
        }
        ld p0 = 1, p1 = r;
        for (int k = 2; k <= n; ++k) {
            const ld p2 = ((2 * k - 1) * r * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        const ld dp = n * (r * p1 - p0) / (r * r - 1);
        x[i] = r;
        w[i] = 2 / ((1 - r * r) * dp * dp);
    }
    return {x, w};
}

// ∫_lo^hi f by composite 32-point Gauss–Legendre on `pieces` panels.
inline ld integrate(const std::function<ld(ld)>& f, ld lo, ld hi, int pieces = 16) {
    static const auto gl = gauss_legendre(32);
    ld total = 0;
    const ld step = (hi - lo) / pieces;
    for (int k = 0; k < pieces; ++k) {
        const ld a = lo + k * step, b = a + step;
        const ld mid = (a + b) / 2, half = (b - a) / 2;
        for (std::size_t i = 0; i < gl.first.size(); ++i) total += gl.second[i] * f(mid + half * gl.first[i]);
    }
    return total * step / 2;
}

// Probabilities of the bins [edges[k], edges[k+1]] under the density
// ∝ (1−u²)^{(p−3)/2} e^{κu}, computed in the angle u = sin φ so that p = 2
// has no endpoint singularity. Edges must start at −1 and end at 1.
inline std::vector<ld> u_bin_probabilities(int p, ld kappa, const std::vector<ld>& edges, int panels = 64) {
    // mode of cos^{p−2}φ e^{κ sin φ}, used as a log-scale anchor
    ld best = -std::numeric_limits<ld>::infinity();
    for (int i = 0; i <= 4000; ++i) {
        const ld phi = -std::numbers::pi_v<ld> / 2 + std::numbers::pi_v<ld> * i / 4000;
        const ld c = std::cos(phi);
        const ld v = (p == 2 ? 0 : (p - 2) * std::log(std::max(c, 1e-300L))) + kappa * std::sin(phi);
        best = std::max(best, v);
    }
    auto f = [&](ld phi) {
        const ld c = std::cos(phi);
        if (c <= 0) return p == 2 ? std::exp(kappa * std::sin(phi) - best) : 0.0L;
        return std::exp((p - 2) * std::log(c) + kappa * std::sin(phi) - best);
    };
    std::vector<ld> prob(edges.size() - 1);
    ld total = 0;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        const ld a = std::asin(std::clamp(edges[k], -1.0L, 1.0L));
        const ld b = std::asin(std::clamp(edges[k + 1], -1.0L, 1.0L));
        prob[k] = integrate(f, a, b, panels);
        total += prob[k];
    }
    for (auto& v : prob) v /= total;
    return prob;
}

// E[(U − c)^k] under the density ∝ (1−u²)^{(p−3)/2} e^{κu}, by Gauss–Legendre
// in u = sin φ on many panels.
inline ld u_moment(int p, ld kappa, int k, ld c = 0, int panels = 4000) {
    ld best = -std::numeric_limits<ld>::infinity();
    for (int i = 1; i < 4000; ++i) {
        const ld phi = -std::numbers::pi_v<ld> / 2 + std::numbers::pi_v<ld> * i / 4000;
        best = std::max(best, (p - 2) * std::log(std::cos(phi)) + kappa * std::sin(phi));
    }
    auto dens = [&](ld phi) {
        const ld cs = std::cos(phi);
        if (cs <= 0) return p == 2 ? std::exp(kappa * std::sin(phi) - best) : 0.0L;
        return std::exp((p - 2) * std::log(cs) + kappa * std::sin(phi) - best);
    };
    const ld lo = -std::numbers::pi_v<ld> / 2, hi = std::numbers::pi_v<ld> / 2;
    const ld z = integrate(dens, lo, hi, panels);
    const ld m = integrate([&](ld phi) { return std::pow(std::sin(phi) - c, k) * dens(phi); }, lo, hi, panels);
    return m / z;
}

// tr[M^ℓ A M^ℓ B] with dense p×p matrices.
inline double dense_trace_form(const std::vector<double>& th, const std::vector<double>& th0, double a, double b,
                               double c, double d, int ell) {
    const std::size_t p = th.size();
    using Mat = std::vector<ld>;
    auto at = [p](Mat& m, std::size_t i, std::size_t j) -> ld& { return m[i * p + j]; };
    auto mul = [&](const Mat& x, const Mat& y) {
        Mat z(p * p, 0);
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t k = 0; k < p; ++k)
                for (std::size_t j = 0; j < p; ++j) z[i * p + j] += x[i * p + k] * y[k * p + j];
        return z;
    };
    Mat M(p * p), A(p * p), B(p * p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j) {
            const ld tt = ld(th[i]) * th[j], t0 = ld(th0[i]) * th0[j], id = i == j ? 1 : 0;
            at(M, i, j) = tt - t0;
            at(A, i, j) = a * tt + b * (id - tt);
            at(B, i, j) = c * tt + d * (id - tt);
        }
    Mat Ml = ell == 1 ? M : mul(M, M);
    const Mat prod = mul(mul(mul(Ml, A), Ml), B);
    ld tr = 0;
    for (std::size_t i = 0; i < p; ++i) tr += prod[i * p + i];
    return double(tr);
}

// Standardized Watson statistic from the pairwise form
// √(2(p−1)) Σ_{i<j} V_i V_j S_i'S_j / Σ V_i², O(n² p).
inline double watson_tilde_pairwise(const std::vector<double>& rows, std::size_t n, std::size_t p,
                                    const std::vector<double>& th0) {
    std::vector<ld> proj(n * p);
    ld sum_v2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        ld u = 0;
        for (std::size_t j = 0; j < p; ++j) u += ld(rows[i * p + j]) * th0[j];
        for (std::size_t j = 0; j < p; ++j) proj[i * p + j] = rows[i * p + j] - u * th0[j];
        sum_v2 += (1 - u) * (1 + u);
    }
    ld pairs = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = i + 1; k < n; ++k) {
            ld s = 0;
            for (std::size_t j = 0; j < p; ++j) s += proj[i * p + j] * proj[k * p + j];
            pairs += s;
        }
    return double(std::sqrt(2.0L * (p - 1)) * pairs / sum_v2);
}

}  // namespace oracle
