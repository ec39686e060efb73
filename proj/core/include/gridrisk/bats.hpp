#pragma once

#include <vector>

#include "gridrisk/spline.hpp"

namespace gridrisk {

// Seven-parameter bulk-and-tails marginal for site temperature. The cdf is a
// student-t cdf composed with a two-sided transform whose location and scale
// vary over the year through periodic splines; the shape parameters control
// the weight of the cold (kappa0) and hot (kappa1) tails.
struct BatsParams {
    double nu = 8.0;
    double kappa0 = 0.2;
    double kappa1 = 0.2;
    PeriodicCubicSpline phi0;  // cold-side location, deg C
    PeriodicCubicSpline phi1;  // hot-side location, deg C
    PeriodicCubicSpline tau0;  // cold-side scale, deg C, > 0 on every day
    PeriodicCubicSpline tau1;  // hot-side scale, deg C, > 0 on every day

    // Non-seasonal parameter set (all splines constant).
    static BatsParams constant(double nu, double kappa0, double kappa1,
                               double phi0, double phi1, double tau0, double tau1);

    void validate() const;  // throws DomainError
};

// Two-sided transform G and its derivative in t (strictly positive).
double bats_transform(double t, const BatsParams& params, double day);
double bats_transform_deriv(double t, const BatsParams& params, double day);

double bats_cdf(double t, const BatsParams& params, double day);
double bats_logpdf(double t, const BatsParams& params, double day);

// Inverse cdf by bracketed bisection on the monotone cdf: tolerance 1e-9 in
// probability space, at most 200 bisection steps.
double bats_quantile(double p, const BatsParams& params, double day);

struct BatsObservation {
    double day;   // day of year, 1..365
    double temp;  // deg C
};

struct BatsFitOptions {
    bool seasonal = false;
    int max_evaluations = 60000;
    // optional clamp applied to fitted shape parameters, disabled by default
    bool clamp_kappa = false;
    double kappa_min = -0.5;
    double kappa_max = 1.5;
};

struct BatsFitResult {
    BatsParams params;
    double loglik = 0.0;
    double init_loglik = 0.0;
    bool converged = false;
    int evaluations = 0;
};

// Maximum-likelihood fit. Uses a Nelder-Mead search with three deterministic
// starts from moment-based initial values; with seasonal=false the splines
// collapse to constants (seven free parameters).
BatsFitResult fit_bats_ml(const std::vector<BatsObservation>& samples,
                          const BatsFitOptions& options = {});

}  // namespace gridrisk
