#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "sphtest/core.hpp"
#include "sphtest/fvml.hpp"
#include "sphtest/test_kind.hpp"

namespace sphtest::stats {

struct TangentDecomp {
    double u, v;
    Direction s;
    bool degenerate;
};

enum class Tail { upper, lower };

struct TestResult {
    double statistic, threshold;
    bool reject;
    double alpha;
    Tail tail;
    double p_value;
};

// Everything the statistics need from a sample, computed once.
struct SampleSummary {
    std::size_t n, p;
    double mean_u;       // X̄'θ₀
    double sum_v2;       // Σ(1 − U_i²)
    double proj_norm2;   // ‖(I − θ₀θ₀')X̄‖²
    std::vector<double> mean;
};

SampleSummary summarize(const SphericalSample& sample, const Direction& theta0);

TangentDecomp tangent_normal(const Direction& x, const Direction& theta0);

double watson_statistic(const SampleSummary& s);
double watson_standardized(const SampleSummary& s);
double w_star(const SampleSummary& s, double f2);
double z_stat(const SampleSummary& s, double e1, double e2_tilde);
double hybrid_statistic(const SampleSummary& s, double kappa, const fvml::MomentSet& m);

TestResult watson(const SphericalSample& sample, const Direction& theta0, double alpha);
TestResult watson(const SampleSummary& s, double alpha);
double watson_standardized(const SphericalSample& sample, const Direction& theta0);
double w_star(const SphericalSample& sample, const Direction& theta0, double f2);
double z_stat(const SphericalSample& sample, const Direction& theta0, double e1, double e2_tilde);
// Level-α form of the Z test: reject when Z < Φ⁻¹(α).
TestResult z_test(const SampleSummary& s, double e1, double e2_tilde, double alpha);
TestResult hybrid(const SphericalSample& sample, const Direction& theta0, double kappa, double alpha);
TestResult hybrid(const SampleSummary& s, double kappa, const fvml::MomentSet& m, double alpha);

double q_stat(double mu, double lambda, double w_tilde, double z);

// Exact log-likelihood ratio of the maximal invariant, FvML(θ,κ) against FvML(θ₀,κ).
double invariant_llr(const SphericalSample& sample, const Direction& theta0, const Direction& theta, double kappa);
double invariant_llr(const SampleSummary& s, const Direction& theta0, const Direction& theta, double kappa);

// Four-term quadratic expansion of invariant_llr around θ₀ (remainder dropped).
double laq_expansion(double w_tilde, double z, double n, double p, double kappa, double nu, double tau_norm,
                     double e1, double e2_tilde);

// tr[M^ℓ A M^ℓ B] with M = θθ' − θ₀θ₀', A = aθθ' + b(I−θθ'), B = cθθ' + d(I−θθ').
double projector_trace_form(const Direction& theta, const Direction& theta0, double a, double b, double c, double d,
                            int ell);

}  // namespace sphtest::stats
