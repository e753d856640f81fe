#include "sphtest/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "sphtest/core.hpp"

namespace sphtest::specfun {

namespace {

constexpr double kPi = std::numbers::pi;

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw DomainError(std::string(what) + " must be finite");
}

// Perron's continued fraction for I_{ν+1}/I_ν, modified Lentz. Valid for ν > −1.
double perron_ratio(double nu, double x) {
    constexpr double kTiny = 1e-300;
    const double v = nu + 1.0;
    double f = 2.0 * v + x, c = f, d = 0.0;
    for (int k = 1; k < 100000; ++k) {
        const double a = -(2.0 * v + 2.0 * k - 1.0) * x;
        const double b = 2.0 * v + k + 2.0 * x;
        d = b + a * d;
        if (d == 0.0) d = kTiny;
        c = b + a / c;
        if (c == 0.0) c = kTiny;
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < 3e-16) break;
    }
    return x / f;
}

// 0F1(; ν+1; x²/4) − 1 with Neumaier summation.
double hyp0f1_tail(double nu, double x) {
    const double y = 0.25 * x * x;
    double term = 1.0, sum = 0.0, comp = 0.0;
    for (int m = 1; m < 10000; ++m) {
        term *= y / (m * (nu + m));
        const double t = sum + term;
        comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
        sum = t;
        if (term <= 1e-17 * sum) break;
    }
    return sum + comp;
}

// log I_ν(x) for x > 2 via Steed's CF2 for e^x K_μ, upward K recurrence and
// the Wronskian I_ν K_{ν+1} + I_{ν+1} K_ν = 1/x.
double log_bessel_i_large(double nu, double x) {
    const int nl = static_cast<int>(std::floor(nu + 0.5));
    const double mu = nu - nl;
    const double mu2 = mu * mu;

    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d, delh = d;
    double q1 = 0.0, q2 = 1.0;
    const double a1 = 0.25 - mu2;
    double q = a1, c = a1, a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 2; i < 100000; ++i) {
        a -= 2.0 * (i - 1);
        c = -a * c / i;
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < 1e-17) break;
    }
    h = a1 * h;
    double kmu = std::sqrt(kPi / (2.0 * x)) / s;  // e^x K_μ(x)
    double k1 = kmu * (mu + x + 0.5 - h) / x;      // e^x K_{μ+1}(x)
    double log_scale = 0.0;
    const double two_over_x = 2.0 / x;
    for (int i = 1; i <= nl; ++i) {
        const double knext = (mu + i) * two_over_x * k1 + kmu;
        kmu = k1;
        k1 = knext;
        if (k1 > 1e250) {
            kmu *= 1e-250;
            k1 *= 1e-250;
            log_scale += 250.0 * std::numbers::ln10;
        }
    }
    const double r = perron_ratio(nu, x);
    return x - log_scale - std::log(x) - std::log(k1 + r * kmu);
}

double acklam(double q) {
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                   1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                   6.680131188771972e+01,  -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                   -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                   3.754408661907416e+00};
    if (q < 0.02425) {
        const double t = std::sqrt(-2.0 * std::log(q));
        return (((((c[0] * t + c[1]) * t + c[2]) * t + c[3]) * t + c[4]) * t + c[5]) /
               ((((d[0] * t + d[1]) * t + d[2]) * t + d[3]) * t + 1.0);
    }
    const double u = q - 0.5, r = u * u;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * u /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

// Lower half only: Φ(x) is computed to full relative precision there.
double quantile_lower(double q) {
    double x = acklam(q);
    const double e = std_normal_cdf(x) - q;
    x -= e * std::sqrt(2.0 * kPi) * std::exp(0.5 * x * x);
    return x;
}

}  // namespace

double bessel_ratio(double nu, double z) {
    require_finite(nu, "nu");
    require_finite(z, "z");
    if (nu < 0.0) throw DomainError("bessel_ratio: nu must be >= 0");
    if (!(z > 0.0)) throw DomainError("bessel_ratio: z must be > 0");
    return perron_ratio(nu, z);
}

BoundPair amos_bounds(double nu, double z) {
    require_finite(nu, "nu");
    require_finite(z, "z");
    if (nu < 0.0) throw DomainError("amos_bounds: nu must be >= 0");
    if (!(z > 0.0)) throw DomainError("amos_bounds: z must be > 0");
    const double low = z / (nu + 1.0 + std::hypot(nu + 1.0, z));
    const double low_tilde = z / (nu + 0.5 + std::hypot(nu + 1.5, z));
    const double high = z / (nu + std::hypot(nu + 2.0, z));
    return {std::max(low, low_tilde), high};
}

double s_bound(double alpha, double beta, double x) {
    require_finite(alpha, "alpha");
    require_finite(beta, "beta");
    require_finite(x, "x");
    if (alpha < 0.0) throw DomainError("s_bound: alpha must be >= 0");
    if (!(beta > 0.0)) throw DomainError("s_bound: beta must be > 0");
    if (x < 0.0) throw DomainError("s_bound: x must be >= 0");
    // √(x²+β²) − β written without cancellation
    const double dlt = x * x / (std::hypot(x, beta) + beta);
    return dlt - alpha * std::log1p(dlt / (alpha + beta));
}

namespace {

// Debye's uniform expansion of I_ν(νz) with lgamma(ν+1) in Stirling form
// folded in, so the two O(ν log ν) terms cancel analytically.
double log_H_debye(double nu, double x) {
    const double z = x / nu;
    const double s = std::hypot(1.0, z);
    const double d = z * z / (1.0 + s);  // s − 1
    const double t = 1.0 / s, t2 = t * t;
    const double u1 = t * (3.0 - 5.0 * t2) / 24.0;
    const double u2 = t2 * (81.0 + t2 * (-462.0 + t2 * 385.0)) / 1152.0;
    const double u3 = t * t2 * (30375.0 + t2 * (-369603.0 + t2 * (765765.0 - t2 * 425425.0))) / 414720.0;
    const double u4 =
        t2 * t2 * (4465125.0 + t2 * (-94121676.0 + t2 * (349922430.0 + t2 * (-446185740.0 + t2 * 185910725.0)))) /
        39813120.0;
    const double r = 1.0 / nu;
    const double series = r * (u1 + r * (u2 + r * (u3 + r * u4)));
    const double stirling = r * (1.0 / 12.0 - r * r * (1.0 / 360.0 - r * r / 1260.0));
    return nu * (d - std::log1p(0.5 * d)) - 0.25 * std::log1p(z * z) + stirling + std::log1p(series);
}

}  // namespace

double log_H(double nu, double x) {
    require_finite(nu, "nu");
    require_finite(x, "x");
    if (!(nu > -0.5)) throw DomainError("log_H: nu must be > -1/2");
    if (x < 0.0) throw DomainError("log_H: x must be >= 0");
    if (x == 0.0) return 0.0;
    if (x * x <= 16.0 * (nu + 1.0)) return std::log1p(hyp0f1_tail(nu, x));
    if (nu >= 400.0) return log_H_debye(nu, x);
    return std::lgamma(nu + 1.0) - nu * std::log(0.5 * x) + log_bessel_i_large(nu, x);
}

double log_c(int p, double kappa) {
    if (p < 2) throw DomainError("log_c: p must be >= 2");
    require_finite(kappa, "kappa");
    if (kappa < 0.0) throw DomainError("log_c: kappa must be >= 0");
    const double log_cp = std::lgamma(0.5 * p) - 0.5 * std::log(kPi) - std::lgamma(0.5 * (p - 1));
    return log_cp - log_H(0.5 * (p - 2), kappa);
}

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double std_normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double std_normal_quantile(double q) {
    if (!(q > 0.0 && q < 1.0)) throw DomainError("std_normal_quantile: q must be in (0,1)");
    if (q == 0.5) return 0.0;
    return q < 0.5 ? quantile_lower(q) : -quantile_lower(1.0 - q);
}

double chi2_cdf(double df, double x) {
    if (!(df > 0.0)) throw DomainError("chi2_cdf: df must be > 0");
    if (x <= 0.0) return 0.0;
    return boost::math::gamma_p(0.5 * df, 0.5 * x);
}

double chi2_sf(double df, double x) {
    if (!(df > 0.0)) throw DomainError("chi2_sf: df must be > 0");
    if (x <= 0.0) return 1.0;
    return boost::math::gamma_q(0.5 * df, 0.5 * x);
}

double chi2_quantile(int df, double q) {
    if (df < 1) throw DomainError("chi2_quantile: df must be >= 1");
    if (!(q > 0.0 && q < 1.0)) throw DomainError("chi2_quantile: q must be in (0,1)");
    const double k = df;
    const bool upper = q > 0.5;
    const double target = upper ? 1.0 - q : q;
    // g(x) decreases in x for the upper tail, increases for the lower one
    auto g = [&](double x) { return (upper ? chi2_sf(k, x) : chi2_cdf(k, x)) - target; };
    auto dens = [&](double x) { return 0.5 * boost::math::gamma_p_derivative(0.5 * k, 0.5 * x); };

    const double z = std_normal_quantile(q);
    const double w = 2.0 / (9.0 * k);
    double x = k * std::pow(std::max(1.0 - w + z * std::sqrt(w), 0.05), 3);

    double lo = 0.0, hi = std::max(2.0 * x, k + 40.0 * std::sqrt(2.0 * k) + 100.0);
    while ((upper ? -1.0 : 1.0) * g(hi) < 0.0) hi *= 2.0;
    for (int it = 0; it < 100; ++it) {
        const double gx = g(x);
        if (gx == 0.0) return x;
        const bool below = (upper ? -gx : gx) < 0.0;  // x left of the root
        (below ? lo : hi) = x;
        const double fx = dens(x);
        double next = fx > 0.0 ? x - (upper ? -gx : gx) / fx : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= 1e-15 * x) return next;
        x = next;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        ((upper ? -gm : gm) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace sphtest::specfun
