#pragma once

#include <cmath>

namespace gridrisk::math {

// log(1 + e^x) without overflow.
double softplus(double x);

// d/dx softplus(x) = 1 / (1 + e^-x).
double logistic(double x);

// Regularized incomplete beta function I_x(a, b).
double incomplete_beta(double a, double b, double x);

// Standard normal cdf / quantile.
double normal_cdf(double x);
double normal_quantile(double p);

// Student-t cdf and log-density with (real) nu > 0 degrees of freedom.
double student_t_cdf(double x, double nu);
double student_t_logpdf(double x, double nu);

inline double celsius_to_fahrenheit(double c) { return 1.8 * c + 32.0; }
inline double fahrenheit_to_celsius(double f) { return (f - 32.0) / 1.8; }

}  // namespace gridrisk::math
