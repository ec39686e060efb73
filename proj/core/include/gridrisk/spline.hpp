#pragma once

#include <array>

namespace gridrisk {

// Cyclic uniform cubic B-spline over the day-of-year axis, nine control
// coefficients, period 365. Evaluates to the coefficient value when all nine
// coefficients are equal.
class PeriodicCubicSpline {
public:
    static constexpr int kCoefficients = 9;
    static constexpr double kPeriod = 365.0;

    PeriodicCubicSpline() { coeffs_.fill(0.0); }
    explicit PeriodicCubicSpline(const std::array<double, kCoefficients>& coeffs)
        : coeffs_(coeffs) {}

    static PeriodicCubicSpline constant(double value) {
        std::array<double, kCoefficients> c;
        c.fill(value);
        return PeriodicCubicSpline(c);
    }

    double operator()(double day) const;

    const std::array<double, kCoefficients>& coefficients() const { return coeffs_; }
    std::array<double, kCoefficients>& coefficients() { return coeffs_; }

    double min_over_year() const;

private:
    std::array<double, kCoefficients> coeffs_;
};

}  // namespace gridrisk
