#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>

#include "sphtest/core.hpp"
#include "sphtest/rng.hpp"

namespace sphtest::fvml {

struct FvmlParams {
    Direction theta;
    double kappa;
};

// Moments of U = X'θ under FvML_p(θ, κ).
struct MomentSet {
    double e1, e2, e2_tilde, f2, f4_over_f2_sq;
};

// Which case of the κ/p trichotomy the leading-order values were taken from.
enum class AsymptoticCase { kappa_dominates, proportional, p_dominates };

struct MomentAsymptotics {
    AsymptoticCase regime;
    double xi;  // κ/p
    MomentSet moments;
};

MomentSet moments(int p, double kappa);
MomentAsymptotics moment_asymptotics(int p, double kappa);

// Declared moments of a radial law: e_k = E[U^k], f_k = E[(1−U²)^{k/2}].
struct RadialMoments {
    double e1, e2, e4, f2, f4;
};

class RadialLaw {
public:
    using Sampler = std::function<double(CounterRng&)>;

    RadialLaw(Sampler sampler, RadialMoments declared);
    // Moments are estimated from 10⁶ draws of a stream derived from `seed`.
    RadialLaw(Sampler sampler, std::uint64_t seed);

    static RadialLaw fvml(int p, double kappa);
    static RadialLaw constant(double u);

    double draw(CounterRng& rng) const;
    const RadialMoments& moments() const { return moments_; }
    bool estimated() const { return estimated_; }

private:
    Sampler sampler_;
    RadialMoments moments_;
    bool estimated_;
};

// Ulrich–Wood rejection sampler for the density ∝ (1−u²)^{(p−3)/2} e^{κu}.
double sample_u(int p, double kappa, CounterRng& rng);

Direction sample_equator(const Direction& theta0, CounterRng& rng);

SphericalSample sample_fvml(const FvmlParams& params, std::size_t n, CounterRng& rng);
SphericalSample sample_rotsym(const Direction& theta, const RadialLaw& law, std::size_t n, CounterRng& rng);
SphericalSample sample_uniform_sphere(int p, std::size_t n, CounterRng& rng);

// (E[(X'θ₀)²], E[(X'θ₀)⁴]) under Rot_p(θ, F).
std::pair<double, double> misspecified_projection_moments(const Direction& theta, const Direction& theta0,
                                                          double e2, double e4, double f2, double f4);

}  // namespace sphtest::fvml
