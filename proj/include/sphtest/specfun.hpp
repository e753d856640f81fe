#pragma once

namespace sphtest::specfun {

struct BoundPair {
    double low, high;
};

// I_{ν+1}(z)/I_ν(z), ν ≥ 0, z > 0.
double bessel_ratio(double nu, double z);

// Amos-type bounds on bessel_ratio: low = max(R^low, R̃^low), high = R^up.
BoundPair amos_bounds(double nu, double z);

// S_{α,β}(x) = √(x²+β²) − β − α·log((α+√(x²+β²))/(α+β)).
double s_bound(double alpha, double beta, double x);

// log H_ν(x), H_ν(x) = Γ(ν+1) I_ν(x) / (x/2)^ν, ν > −½, x ≥ 0.
double log_H(double nu, double x);

// Log normalizing constant of FvML_p(·, κ) w.r.t. the U-density on [−1,1]:
// c = 1/∫(1−t²)^{(p−3)/2} e^{κt} dt.
double log_c(int p, double kappa);

double std_normal_cdf(double x);
double std_normal_sf(double x);
double std_normal_quantile(double q);

double chi2_cdf(double df, double x);
double chi2_sf(double df, double x);
double chi2_quantile(int df, double q);

}  // namespace sphtest::specfun
