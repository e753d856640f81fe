#include "sphtest/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sphtest/kernels.hpp"
#include "sphtest/specfun.hpp"

namespace sphtest::stats {

namespace {

// Pairwise sum of rows [lo, hi) into out.
void sum_rows(const SphericalSample& x, std::size_t lo, std::size_t hi, std::span<double> out) {
    if (hi - lo <= 8) {
        std::fill(out.begin(), out.end(), 0.0);
        for (std::size_t i = lo; i < hi; ++i) kernels::axpy(1.0, x.row(i), out);
        return;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    std::vector<double> right(out.size());
    sum_rows(x, lo, mid, out);
    sum_rows(x, mid, hi, right);
    kernels::axpy(1.0, right, out);
}

// (1 − ρ) for unit vectors, via ½‖a − b‖² rather than 1 − a'b.
double one_minus_cos(std::span<const double> a, std::span<const double> b) {
    std::vector<double> d(a.begin(), a.end());
    kernels::axpy(-1.0, b, d);
    return 0.5 * kernels::dot(d, d);
}

double log_cosh(double x) {
    const double ax = std::abs(x);
    return ax + std::log1p(std::exp(-2.0 * ax)) - std::numbers::ln2;
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must be in (0,1)");
}

// A row equal to ±θ₀ still leaves V² of order p·ε after rounding.
void check_not_degenerate(const SampleSummary& s) {
    const double floor = 16.0 * s.p * std::numeric_limits<double>::epsilon();
    if (!(s.sum_v2 > floor * s.n)) throw DegenerateSampleError("watson: all observations lie at ±theta0");
}

}  // namespace

SampleSummary summarize(const SphericalSample& sample, const Direction& theta0) {
    require_same_dim(sample.p(), theta0.dim(), "summarize");
    const std::size_t n = sample.n(), p = sample.p();
    const auto th = theta0.coords();
    SampleSummary s{n, p, 0.0, 0.0, 0.0, std::vector<double>(p)};

    std::vector<double> u(n), v2(n);
    for (std::size_t i = 0; i < n; ++i) {
        u[i] = kernels::dot(sample.row(i), th);
        v2[i] = (1.0 - u[i]) * (1.0 + u[i]);
    }
    s.mean_u = kernels::sum(u) / n;
    s.sum_v2 = kernels::sum(v2);

    sum_rows(sample, 0, n, s.mean);
    kernels::scale(1.0 / n, s.mean);
    std::vector<double> proj = s.mean;
    kernels::axpy(-kernels::dot(proj, th), th, proj);
    s.proj_norm2 = kernels::dot(proj, proj);
    return s;
}

TangentDecomp tangent_normal(const Direction& x, const Direction& theta0) {
    require_same_dim(x.dim(), theta0.dim(), "tangent_normal");
    const std::size_t p = x.dim();
    const auto th = theta0.coords();
    const double u = x.dot(theta0);
    std::vector<double> r(x.coords().begin(), x.coords().end());
    kernels::axpy(-u, th, r);
    const double nr = std::sqrt(kernels::dot(r, r));
    if (nr > 1e-12) {
        kernels::scale(1.0 / nr, r);
        return {u, nr, Direction(std::move(r)), false};
    }
    // x = ±θ₀: complete with the first basis vector not parallel to θ₀
    for (std::size_t k = 0; k < p; ++k) {
        std::vector<double> e(p, 0.0);
        e[k] = 1.0;
        kernels::axpy(-th[k], th, e);
        const double ne = std::sqrt(kernels::dot(e, e));
        if (ne > 1e-6) {
            kernels::scale(1.0 / ne, e);
            return {u >= 0.0 ? 1.0 : -1.0, 0.0, Direction(std::move(e)), true};
        }
    }
    throw DimensionError("tangent_normal: no orthogonal completion (p < 2)");
}

double watson_statistic(const SampleSummary& s) {
    check_not_degenerate(s);
    const double n = s.n;
    return n * n * (s.p - 1.0) * s.proj_norm2 / s.sum_v2;
}

// Σ_{i<j} V_i V_j S_i'S_j = ½(n²‖ΠX̄‖² − ΣV_i²)
static double pair_sum(const SampleSummary& s) {
    const double n = s.n;
    return 0.5 * (n * n * s.proj_norm2 - s.sum_v2);
}

double watson_standardized(const SampleSummary& s) {
    check_not_degenerate(s);
    return std::sqrt(2.0 * (s.p - 1.0)) * pair_sum(s) / s.sum_v2;
}

double w_star(const SampleSummary& s, double f2) {
    if (!(f2 > 0.0)) throw DomainError("w_star: f2 must be > 0");
    return std::sqrt(2.0 * (s.p - 1.0)) * pair_sum(s) / (s.n * f2);
}

double z_stat(const SampleSummary& s, double e1, double e2_tilde) {
    if (!(e2_tilde > 0.0)) throw DomainError("z_stat: e2_tilde must be > 0");
    return std::sqrt(double(s.n)) * (s.mean_u - e1) / std::sqrt(e2_tilde);
}

double hybrid_statistic(const SampleSummary& s, double kappa, const fvml::MomentSet& m) {
    if (!(kappa > 0.0)) throw DomainError("hybrid: kappa must be > 0");
    const double xi = std::sqrt(double(s.n)) * kappa / s.p;
    const double w = watson_standardized(s);
    const double z = z_stat(s, m.e1, m.e2_tilde);
    return (w / std::numbers::sqrt2 - z / (2.0 * xi)) / std::sqrt(0.5 + 0.25 / (xi * xi));
}

TestResult watson(const SampleSummary& s, double alpha) {
    check_alpha(alpha);
    const double w = watson_statistic(s);
    const double thr = specfun::chi2_quantile(static_cast<int>(s.p - 1), 1.0 - alpha);
    return {w, thr, w > thr, alpha, Tail::upper, specfun::chi2_sf(s.p - 1.0, w)};
}

TestResult watson(const SphericalSample& sample, const Direction& theta0, double alpha) {
    return watson(summarize(sample, theta0), alpha);
}

double watson_standardized(const SphericalSample& sample, const Direction& theta0) {
    return watson_standardized(summarize(sample, theta0));
}

double w_star(const SphericalSample& sample, const Direction& theta0, double f2) {
    return w_star(summarize(sample, theta0), f2);
}

double z_stat(const SphericalSample& sample, const Direction& theta0, double e1, double e2_tilde) {
    return z_stat(summarize(sample, theta0), e1, e2_tilde);
}

TestResult z_test(const SampleSummary& s, double e1, double e2_tilde, double alpha) {
    check_alpha(alpha);
    const double z = z_stat(s, e1, e2_tilde);
    const double thr = specfun::std_normal_quantile(alpha);
    return {z, thr, z < thr, alpha, Tail::lower, specfun::std_normal_cdf(z)};
}

TestResult hybrid(const SampleSummary& s, double kappa, const fvml::MomentSet& m, double alpha) {
    check_alpha(alpha);
    const double h = hybrid_statistic(s, kappa, m);
    const double thr = specfun::std_normal_quantile(1.0 - alpha);
    return {h, thr, h > thr, alpha, Tail::upper, specfun::std_normal_sf(h)};
}

TestResult hybrid(const SphericalSample& sample, const Direction& theta0, double kappa, double alpha) {
    const auto m = fvml::moments(static_cast<int>(sample.p()), kappa);
    return hybrid(summarize(sample, theta0), kappa, m, alpha);
}

double q_stat(double mu, double lambda, double w_tilde, double z) {
    if (mu < 0.0 || lambda < 0.0) throw DomainError("q_stat: weights must be non-negative");
    return mu * w_tilde - lambda * z;
}

double invariant_llr(const SampleSummary& s, const Direction& theta0, const Direction& theta, double kappa) {
    require_same_dim(s.p, theta0.dim(), "invariant_llr");
    require_same_dim(theta.dim(), theta0.dim(), "invariant_llr");
    if (!(kappa > 0.0) || !std::isfinite(kappa)) throw DomainError("invariant_llr: kappa must be finite and > 0");
    const auto th0 = theta0.coords();
    const double n = s.n;
    const double mean_u = kernels::dot(s.mean, th0);

    std::vector<double> pt(theta.coords().begin(), theta.coords().end());
    kernels::axpy(-theta.dot(theta0), th0, pt);
    const double proj_theta = std::sqrt(kernels::dot(pt, pt));

    const double linear = -n * kappa * one_minus_cos(theta.coords(), th0) * mean_u;
    const double arg = n * kappa * proj_theta * std::sqrt(s.proj_norm2);
    if (arg == 0.0) return linear;
    if (s.p == 2) return linear + log_cosh(arg);
    return linear + specfun::log_H(0.5 * (s.p - 3.0), arg);
}

double invariant_llr(const SphericalSample& sample, const Direction& theta0, const Direction& theta,
                     double kappa) {
    return invariant_llr(summarize(sample, theta0), theta0, theta, kappa);
}

double laq_expansion(double w_tilde, double z, double n, double p, double kappa, double nu, double tau_norm,
                     double e1, double e2_tilde) {
    const double t2 = tau_norm * tau_norm;
    const double nu2 = nu * nu;
    const double shrink = 1.0 - 0.25 * nu2 * t2;
    return -0.5 * std::sqrt(n) * kappa * nu2 * std::sqrt(e2_tilde) * t2 * z +
           n * kappa * nu2 * e1 / (std::numbers::sqrt2 * std::sqrt(p)) * t2 * shrink * w_tilde -
           0.125 * n * kappa * nu2 * nu2 * e1 * t2 * t2 -
           n * n * kappa * kappa * nu2 * nu2 * e1 * e1 / (4.0 * p) * t2 * t2 * shrink * shrink;
}

double projector_trace_form(const Direction& theta, const Direction& theta0, double a, double b, double c, double d,
                            int ell) {
    require_same_dim(theta.dim(), theta0.dim(), "projector_trace_form");
    const double rho = theta.dot(theta0);
    const double s = (1.0 - rho) * (1.0 + rho);
    if (ell == 1) return (a * d + b * c) * s + (a - b) * (c - d) * s * s;
    if (ell == 2) return (a * c + b * d) * s * s;
    throw DomainError("projector_trace_form: ell must be 1 or 2");
}

}  // namespace sphtest::stats
