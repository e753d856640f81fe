#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "sphtest/core.hpp"

namespace sphtest::regimes {

enum class Regime { I, II, III, IV, Va, Vb, Vc, VI, VII };

inline constexpr std::array<Regime, 9> kAllRegimes = {Regime::I,  Regime::II, Regime::III, Regime::IV, Regime::Va,
                                                      Regime::Vb, Regime::Vc, Regime::VI,  Regime::VII};
// The eight regimes of the simulation study (no recipe exists for Vc there).
inline constexpr std::array<Regime, 8> kStudyRegimes = {Regime::I,  Regime::II, Regime::III, Regime::IV,
                                                        Regime::Va, Regime::Vb, Regime::VI,  Regime::VII};

std::string_view to_string(Regime r);
std::optional<Regime> parse_regime(std::string_view s);
int index_of(Regime r);

// Regimes that carry a limiting constant ξ.
bool has_xi(Regime r);

struct RegimeSpec {
    Regime label;
    std::optional<double> xi;
    double kappa, nu;
};

double kappa_for_regime(Regime r, double n, double p);
double contiguity_rate(Regime r, double n, double p, double kappa, bool severe);
// ξ from the realized triple: II κ/p, IV √nκ/p, Vb √nκ/p^{3/4}, VI √nκ/√p.
std::optional<double> xi_for_regime(Regime r, double n, double p, double kappa);
RegimeSpec make_spec(Regime r, double n, double p, bool severe);

struct LocalAlternative {
    Direction theta;
    double nu;
    std::vector<double> tau;
    double t;
};

// θ = θ₀ + ν τ with ‖τ‖ = 2ℓ/L, built in the e₁ frame and carried to θ₀ by
// the Householder reflection that maps e₁ to θ₀.
LocalAlternative local_alternative(const Direction& theta0, double nu, int ell, int L);

bool check_constraint(const Direction& theta0, double nu, std::span<const double> tau);

struct Diagnosis {
    double kappa_over_p, sqrtn_kappa_over_p, sqrtn_kappa_over_p34, sqrtn_kappa_over_sqrtp;
    Regime nearest;
};

// Advisory: boundary row (II, IV, Vb, VI) whose ratio is within a factor √2
// of 1 and closest to it in log scale, else the interior row fixed by the
// ratios' signs.
Diagnosis diagnose(double n, double p, double kappa);

}  // namespace sphtest::regimes
