#include "sphtest/regimes.hpp"

#include <cmath>
#include <numbers>

#include "sphtest/kernels.hpp"

namespace sphtest::regimes {

namespace {

void check_np(double n, double p) {
    if (!(n >= 1.0) || !(p >= 2.0) || !std::isfinite(n) || !std::isfinite(p))
        throw DomainError("need n >= 1 and p >= 2");
}

void check_kappa(double kappa) {
    if (!(kappa > 0.0) || !std::isfinite(kappa)) throw DomainError("kappa must be finite and > 0");
}

}  // namespace

std::string_view to_string(Regime r) {
    switch (r) {
        case Regime::I: return "i";
        case Regime::II: return "ii";
        case Regime::III: return "iii";
        case Regime::IV: return "iv";
        case Regime::Va: return "va";
        case Regime::Vb: return "vb";
        case Regime::Vc: return "vc";
        case Regime::VI: return "vi";
        case Regime::VII: return "vii";
    }
    return "?";
}

std::optional<Regime> parse_regime(std::string_view s) {
    for (Regime r : kAllRegimes)
        if (to_string(r) == s) return r;
    return std::nullopt;
}

int index_of(Regime r) { return static_cast<int>(r); }

bool has_xi(Regime r) { return r == Regime::II || r == Regime::IV || r == Regime::Vb || r == Regime::VI; }

double kappa_for_regime(Regime r, double n, double p) {
    check_np(n, p);
    const double sn = std::sqrt(n);
    switch (r) {
        case Regime::I: return p * p;
        case Regime::II: return p;
        case Regime::III: return p / std::pow(n, 0.25);
        case Regime::IV: return p / sn;
        case Regime::Va: return std::pow(p, 0.875) / sn;
        case Regime::Vb: return std::pow(p, 0.75) / sn;
        case Regime::Vc: return std::pow(p, 0.625) / sn;
        case Regime::VI: return std::sqrt(p) / sn;
        case Regime::VII: return std::pow(p, 0.25) / sn;
    }
    throw DomainError("unknown regime");
}

double contiguity_rate(Regime r, double n, double p, double kappa, bool severe) {
    check_np(n, p);
    check_kappa(kappa);
    const double sn = std::sqrt(n);
    const double p34 = std::pow(p, 0.75);
    switch (r) {
        case Regime::I: return std::pow(p, 0.25) / std::sqrt(n * kappa);
        case Regime::II: {
            const double xi = kappa / p;
            const double c = 0.5 + std::sqrt(0.25 + xi * xi);
            return std::sqrt(c) * p34 / (sn * kappa);
        }
        case Regime::III:
        case Regime::IV: return p34 / (sn * kappa);
        case Regime::Va:
            if (severe) return p34 / (sn * kappa);
            return std::pow(p, 0.25) / (std::pow(n, 0.25) * std::sqrt(kappa));
        case Regime::Vb:
        case Regime::Vc:
            if (severe) return 1.0;
            return std::pow(p, 0.25) / (std::pow(n, 0.25) * std::sqrt(kappa));
        case Regime::VI:
        case Regime::VII: return 1.0;
    }
    throw DomainError("unknown regime");
}

std::optional<double> xi_for_regime(Regime r, double n, double p, double kappa) {
    check_np(n, p);
    check_kappa(kappa);
    const double sn = std::sqrt(n);
    switch (r) {
        case Regime::II: return kappa / p;
        case Regime::IV: return sn * kappa / p;
        case Regime::Vb: return sn * kappa / std::pow(p, 0.75);
        case Regime::VI: return sn * kappa / std::sqrt(p);
        default: return std::nullopt;
    }
}

RegimeSpec make_spec(Regime r, double n, double p, bool severe) {
    const double kappa = kappa_for_regime(r, n, p);
    return {r, xi_for_regime(r, n, p, kappa), kappa, contiguity_rate(r, n, p, kappa, severe)};
}

LocalAlternative local_alternative(const Direction& theta0, double nu, int ell, int L) {
    if (L < 1) throw DomainError("local_alternative: L must be >= 1");
    if (ell < 0 || ell > L) throw DomainError("local_alternative: ell must be in 0..L");
    if (!(nu > 0.0) || !std::isfinite(nu)) throw DomainError("local_alternative: nu must be finite and > 0");
    const std::size_t p = theta0.dim();
    if (p < 2) throw DimensionError("local_alternative: p must be >= 2");
    const double r = double(ell) / L;
    const double g = nu * nu * r * r;
    if (g > 1.0) throw GeometryError("local_alternative: nu^2 ell^2 / L^2 > 1 leaves the sphere");

    // e₁ frame: τ = (−2νr², 2r√(1−ν²r²), 0, …)
    std::vector<double> tau(p, 0.0);
    tau[0] = -2.0 * nu * r * r;
    tau[1] = 2.0 * r * std::sqrt(1.0 - g);

    // Householder H = I − 2ww'/w'w with w = e₁ − θ₀ sends e₁ to θ₀.
    std::vector<double> w(theta0.coords().begin(), theta0.coords().end());
    kernels::scale(-1.0, w);
    w[0] += 1.0;
    const double ww = kernels::dot(w, w);
    if (ww > 0.0) kernels::axpy(-2.0 * kernels::dot(w, tau) / ww, w, tau);

    const double t = 2.0 * r;
    std::vector<double> th(theta0.coords().begin(), theta0.coords().end());
    kernels::axpy(nu, tau, th);
    // θ'θ is 1 up to rounding; renormalize so the Direction invariant is exact
    Direction theta = Direction::normalized(std::move(th));
    return {std::move(theta), nu, std::move(tau), t};
}

bool check_constraint(const Direction& theta0, double nu, std::span<const double> tau) {
    require_same_dim(theta0.dim(), tau.size(), "check_constraint");
    const double lhs = kernels::dot(theta0.coords(), tau);
    return std::abs(lhs + 0.5 * nu * kernels::dot(tau, tau)) < 1e-10;
}

Diagnosis diagnose(double n, double p, double kappa) {
    check_np(n, p);
    check_kappa(kappa);
    const double sn = std::sqrt(n);
    Diagnosis d{kappa / p, sn * kappa / p, sn * kappa / std::pow(p, 0.75), sn * kappa / std::sqrt(p), Regime::I};
    const double l[4] = {std::log(d.kappa_over_p), std::log(d.sqrtn_kappa_over_p), std::log(d.sqrtn_kappa_over_p34),
                         std::log(d.sqrtn_kappa_over_sqrtp)};
    static constexpr Regime boundary[4] = {Regime::II, Regime::IV, Regime::Vb, Regime::VI};
    static constexpr Regime interior[5] = {Regime::I, Regime::III, Regime::Va, Regime::Vc, Regime::VII};
    int best = 0;
    for (int k = 1; k < 4; ++k)
        if (std::abs(l[k]) < std::abs(l[best])) best = k;
    if (std::abs(l[best]) <= 0.5 * std::numbers::ln2) {
        d.nearest = boundary[best];
        return d;
    }
    // l[0] ≤ l[1] ≤ l[2] ≤ l[3], so the count of negative log-ratios picks
    // the interior row.
    int k = 0;
    while (k < 4 && l[k] < 0.0) ++k;
    d.nearest = interior[k];
    return d;
}

}  // namespace sphtest::regimes
