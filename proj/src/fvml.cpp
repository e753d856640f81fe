#include "sphtest/fvml.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "sphtest/kernels.hpp"
#include "sphtest/specfun.hpp"

namespace sphtest::fvml {

namespace {

void check_p_kappa(int p, double kappa) {
    if (p < 2) throw DomainError("p must be >= 2");
    if (!std::isfinite(kappa)) throw DomainError("kappa must be finite");
    if (!(kappa > 0.0)) throw DomainError("kappa must be > 0");
}

// Marsaglia–Tsang, with the U^{1/a} boost below a = 1.
double gamma_draw(double a, CounterRng& rng) {
    if (a < 1.0) {
        const double g = gamma_draw(a + 1.0, rng);
        return g * std::pow(rng.uniform_open(), 1.0 / a);
    }
    const double d = a - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        const double x = rng.normal();
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        const double u = rng.uniform_open();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double symmetric_beta(double a, CounterRng& rng) {
    const double g1 = gamma_draw(a, rng);
    const double g2 = gamma_draw(a, rng);
    return g1 / (g1 + g2);
}

// Writes n rows u·θ + √(1−u²)·s, s uniform on the equator of θ.
template <class DrawU>
SphericalSample tangent_normal_rows(const Direction& theta, std::size_t n, CounterRng& rng, DrawU&& draw_u) {
    const std::size_t p = theta.dim();
    if (p < 2) throw DimensionError("sphere dimension must be at least 2");
    if (n < 1) throw DimensionError("sample size must be at least 1");
    const auto th = theta.coords();
    std::vector<double> data(n * p);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = draw_u(rng);
        const double v = std::sqrt((1.0 - u) * (1.0 + u));
        std::span<double> row(data.data() + i * p, p);
        double nn;
        do {
            rng.fill_normals(row);
            kernels::axpy(-kernels::dot(row, th), th, row);
            nn = kernels::dot(row, row);
        } while (nn < 1e-60);
        kernels::scale(v / std::sqrt(nn), row);
        kernels::axpy(u, th, row);
    }
    return SphericalSample(n, p, std::move(data));
}

}  // namespace

MomentSet moments(int p, double kappa) {
    check_p_kappa(p, kappa);
    const double e1 = specfun::bessel_ratio(0.5 * p - 1.0, kappa);
    const double f2 = (p - 1) * e1 / kappa;
    const double e2 = 1.0 - f2;
    const double e2_tilde = 1.0 - f2 - e1 * e1;
    if (!(e2_tilde > 0.0)) throw DomainError("moments: variance of U underflows (kappa/p out of numeric range)");
    const double f4r = double(p + 1) / (p - 1) * specfun::bessel_ratio(0.5 * p, kappa) / e1;
    return {e1, e2, e2_tilde, f2, f4r};
}

MomentAsymptotics moment_asymptotics(int p, double kappa) {
    if (p < 2) throw DomainError("p must be >= 2");
    const double xi = kappa / p;
    const double root = std::sqrt(0.25 + xi * xi);
    const double c = 0.5 + root;
    MomentSet m;
    m.e1 = xi / c;
    m.f2 = 1.0 / c;
    m.e2 = 1.0 - m.f2;
    m.e2_tilde = (0.5 + 0.25 / root) / (p * c * c);
    m.f4_over_f2_sq = 1.0;
    const AsymptoticCase which = xi > 10.0   ? AsymptoticCase::kappa_dominates
                                 : xi < 0.1 ? AsymptoticCase::p_dominates
                                            : AsymptoticCase::proportional;
    return {which, xi, m};
}

RadialLaw::RadialLaw(Sampler sampler, RadialMoments declared)
    : sampler_(std::move(sampler)), moments_(declared), estimated_(false) {}

RadialLaw::RadialLaw(Sampler sampler, std::uint64_t seed) : sampler_(std::move(sampler)), estimated_(true) {
    constexpr std::size_t kDraws = 1000000;
    CounterRng rng = CounterRng::from_seed(hash64({seed, 0x52414449414cull}));
    std::vector<double> u1(kDraws), u2(kDraws), u4(kDraws), w4(kDraws);
    for (std::size_t i = 0; i < kDraws; ++i) {
        const double u = draw(rng);
        const double v2 = (1.0 - u) * (1.0 + u);
        u1[i] = u;
        u2[i] = u * u;
        u4[i] = u2[i] * u2[i];
        w4[i] = v2 * v2;
    }
    const double inv = 1.0 / kDraws;
    moments_.e1 = kernels::sum(u1) * inv;
    moments_.e2 = kernels::sum(u2) * inv;
    moments_.e4 = kernels::sum(u4) * inv;
    moments_.f2 = 1.0 - moments_.e2;
    moments_.f4 = kernels::sum(w4) * inv;
}

RadialLaw RadialLaw::fvml(int p, double kappa) {
    check_p_kappa(p, kappa);
    RadialMoments rm;
    if (kappa < 1e-300) {
        const double pd = p;
        rm = {0.0, 1.0 / pd, 3.0 / (pd * (pd + 2.0)), (pd - 1.0) / pd, 0.0};
        rm.f4 = 1.0 - 2.0 * rm.e2 + rm.e4;
    } else {
        const MomentSet m = fvml::moments(p, kappa);
        rm.e1 = m.e1;
        rm.e2 = m.e2;
        rm.f2 = m.f2;
        rm.f4 = m.f4_over_f2_sq * m.f2 * m.f2;
        rm.e4 = rm.f4 - 1.0 + 2.0 * m.e2;
    }
    return RadialLaw([p, kappa](CounterRng& rng) { return sample_u(p, kappa, rng); }, rm);
}

RadialLaw RadialLaw::constant(double u) {
    if (!(u >= -1.0 && u <= 1.0)) throw DomainError("constant radial law needs u in [-1,1]");
    const double v2 = (1.0 - u) * (1.0 + u);
    return RadialLaw([u](CounterRng&) { return u; }, RadialMoments{u, u * u, u * u * u * u, v2, v2 * v2});
}

double RadialLaw::draw(CounterRng& rng) const {
    const double u = sampler_(rng);
    if (!(u >= -1.0 && u <= 1.0)) throw DomainError("radial law produced a value outside [-1,1]");
    return u;
}

double sample_u(int p, double kappa, CounterRng& rng) {
    check_p_kappa(p, kappa);
    if (kappa < 1e-300) kappa = 0.0;
    const double m = p - 1;
    const double b = m / (2.0 * kappa + std::hypot(2.0 * kappa, m));
    const double x0 = (1.0 - b) / (1.0 + b);
    const double one_minus_x0 = 2.0 * b / (1.0 + b);
    const double log_1mx0sq = std::log(4.0 * b) - 2.0 * std::log1p(b);
    for (;;) {
        const double z = symmetric_beta(0.5 * m, rng);
        const double denom = 1.0 - (1.0 - b) * z;
        const double one_minus_w = 2.0 * b * z / denom;
        const double u = rng.uniform_open();
        // κW + m·log(1 − x₀W) − (κx₀ + m·log(1 − x₀²)), arranged to avoid cancellation near W = 1
        const double t = -kappa * (one_minus_w - one_minus_x0) +
                         m * (std::log(one_minus_x0 + x0 * one_minus_w) - log_1mx0sq);
        if (t >= std::log(u)) return std::clamp(1.0 - one_minus_w, -1.0, 1.0);
    }
}

Direction sample_equator(const Direction& theta0, CounterRng& rng) {
    const std::size_t p = theta0.dim();
    if (p < 2) throw DimensionError("sphere dimension must be at least 2");
    const auto th = theta0.coords();
    std::vector<double> g(p);
    double nn;
    do {
        rng.fill_normals(g);
        kernels::axpy(-kernels::dot(g, th), th, g);
        nn = kernels::dot(g, g);
    } while (nn < 1e-60);
    kernels::scale(1.0 / std::sqrt(nn), g);
    return Direction(std::move(g));
}

SphericalSample sample_fvml(const FvmlParams& params, std::size_t n, CounterRng& rng) {
    const int p = static_cast<int>(params.theta.dim());
    check_p_kappa(p, params.kappa);
    return tangent_normal_rows(params.theta, n, rng,
                               [&](CounterRng& r) { return sample_u(p, params.kappa, r); });
}

SphericalSample sample_rotsym(const Direction& theta, const RadialLaw& law, std::size_t n, CounterRng& rng) {
    return tangent_normal_rows(theta, n, rng, [&](CounterRng& r) { return law.draw(r); });
}

SphericalSample sample_uniform_sphere(int p, std::size_t n, CounterRng& rng) {
    if (p < 2) throw DimensionError("sphere dimension must be at least 2");
    if (n < 1) throw DimensionError("sample size must be at least 1");
    std::vector<double> data(n * p);
    for (std::size_t i = 0; i < n; ++i) {
        std::span<double> row(data.data() + i * p, p);
        double nn;
        do {
            rng.fill_normals(row);
            nn = kernels::dot(row, row);
        } while (nn < 1e-60);
        kernels::scale(1.0 / std::sqrt(nn), row);
    }
    return SphericalSample(n, p, std::move(data));
}

std::pair<double, double> misspecified_projection_moments(const Direction& theta, const Direction& theta0,
                                                          double e2, double e4, double f2, double f4) {
    require_same_dim(theta.dim(), theta0.dim(), "misspecified_projection_moments");
    const double p = theta.dim();
    const double rho = theta0.dot(theta);
    const double r2 = rho * rho;
    const double s2 = (1.0 - rho) * (1.0 + rho);
    const double m2 = e2 * r2 + f2 / (p - 1.0) * s2;
    const double m4 = e4 * r2 * r2 + 6.0 * (e2 - e4) / (p - 1.0) * r2 * s2 + 3.0 * f4 / (p * p - 1.0) * s2 * s2;
    return {m2, m4};
}

}  // namespace sphtest::fvml
