#include "gridrisk/spline.hpp"

#include <algorithm>
#include <cmath>

namespace gridrisk {

double PeriodicCubicSpline::operator()(double day) const {
    constexpr int n = kCoefficients;
    double u = std::fmod(day, kPeriod);
    if (u < 0.0) u += kPeriod;
    u = u / kPeriod * n;  // parameter in [0, n)
    const int i = static_cast<int>(u);
    const double t = u - i;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double w0 = (1.0 - 3.0 * t + 3.0 * t2 - t3) / 6.0;
    const double w1 = (4.0 - 6.0 * t2 + 3.0 * t3) / 6.0;
    const double w2 = (1.0 + 3.0 * t + 3.0 * t2 - 3.0 * t3) / 6.0;
    const double w3 = t3 / 6.0;
    const auto wrap = [n](int j) { return ((j % n) + n) % n; };
    return w0 * coeffs_[wrap(i - 1)] + w1 * coeffs_[wrap(i)] +
           w2 * coeffs_[wrap(i + 1)] + w3 * coeffs_[wrap(i + 2)];
}

double PeriodicCubicSpline::min_over_year() const {
    double m = (*this)(0.0);
    for (int d = 0; d <= 365; ++d) {
        for (double frac : {0.0, 0.25, 0.5, 0.75}) {
            m = std::min(m, (*this)(d + frac));
        }
    }
    return m;
}

}  // namespace gridrisk
