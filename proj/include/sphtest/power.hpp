#pragma once

#include <optional>

#include "sphtest/regimes.hpp"
#include "sphtest/test_kind.hpp"

namespace sphtest::power {

using regimes::Regime;

struct FisherInfo2 {
    double g11, g12, g22;
};

struct EfficientCentral {
    double delta_star, gamma_star;
};

// Γ of the specified-κ LAQ limit; ξ is required for IV and VI.
double gamma_for_regime(Regime r, std::optional<double> xi = std::nullopt);

// 1 − Φ(Φ⁻¹(1−α) − √Γ t²)
double optimal_power(double gamma, double t, double alpha);

double watson_power(Regime r, double t, double alpha, std::optional<double> xi = std::nullopt, bool severe = false);

double optimal_power_regime_iv(double t, double alpha, double xi);

// Information matrix of (θ, κ) in the unspecified-κ problem; IV, Va, Vb, Vc, VI only.
FisherInfo2 fisher_info_unspec(Regime r, std::optional<double> xi = std::nullopt);

EfficientCentral efficient_central_sequence(double delta1, double delta2, const FisherInfo2& info);

// Best achievable limiting power; nullopt where no test detects the alternative.
std::optional<double> optimal_power_specified(Regime r, double t, double alpha, std::optional<double> xi);
std::optional<double> optimal_power_unspecified(Regime r, double t, double alpha, std::optional<double> xi,
                                                bool severe);

// Limiting rejection probability of one simulated test at the study's
// (n, p, κ) and t. nullopt where no test is consistent.
std::optional<double> study_asymptotic_power(TestKind test, Regime r, double t, double alpha, double n, double p,
                                             double kappa, bool severe);

}  // namespace sphtest::power
