#include "gridrisk/bats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "gridrisk/errors.hpp"
#include "gridrisk/math.hpp"

namespace gridrisk {

namespace {

// {1 + kappa * psi}^(1/kappa); continuous limit exp(psi) as kappa -> 0.
// For kappa < 0 the base is floored at a tiny positive value, which saturates
// the corresponding bounded tail.
double power_term(double kappa, double psi) {
    if (std::abs(kappa) < 1e-10) return std::exp(psi);
    double base = 1.0 + kappa * psi;
    if (base < 1e-12) base = 1e-12;
    return std::pow(base, 1.0 / kappa);
}

double power_term_deriv_factor(double kappa, double psi) {
    // d/dpsi {1 + kappa*psi}^(1/kappa) = {1 + kappa*psi}^(1/kappa - 1)
    if (std::abs(kappa) < 1e-10) return std::exp(psi);
    double base = 1.0 + kappa * psi;
    if (base < 1e-12) base = 1e-12;
    return std::pow(base, 1.0 / kappa - 1.0);
}

}  // namespace

BatsParams BatsParams::constant(double nu, double kappa0, double kappa1,
                                double phi0, double phi1, double tau0, double tau1) {
    BatsParams p;
    p.nu = nu;
    p.kappa0 = kappa0;
    p.kappa1 = kappa1;
    p.phi0 = PeriodicCubicSpline::constant(phi0);
    p.phi1 = PeriodicCubicSpline::constant(phi1);
    p.tau0 = PeriodicCubicSpline::constant(tau0);
    p.tau1 = PeriodicCubicSpline::constant(tau1);
    p.validate();
    return p;
}

void BatsParams::validate() const {
    if (!(nu > 0.0) || !std::isfinite(nu)) {
        throw DomainError("BatsParams: nu must be positive and finite");
    }
    if (!std::isfinite(kappa0) || !std::isfinite(kappa1)) {
        throw DomainError("BatsParams: shape parameters must be finite");
    }
    if (!(tau0.min_over_year() > 0.0) || !(tau1.min_over_year() > 0.0)) {
        throw DomainError("BatsParams: scale splines must be positive on every day");
    }
}

double bats_transform(double t, const BatsParams& params, double day) {
    const double hot = power_term(params.kappa1, math::softplus((t - params.phi1(day)) / params.tau1(day)));
    const double cold = power_term(params.kappa0, math::softplus((params.phi0(day) - t) / params.tau0(day)));
    return hot - cold;
}

double bats_transform_deriv(double t, const BatsParams& params, double day) {
    const double tau1 = params.tau1(day);
    const double tau0 = params.tau0(day);
    const double x1 = (t - params.phi1(day)) / tau1;
    const double x0 = (params.phi0(day) - t) / tau0;
    const double hot = power_term_deriv_factor(params.kappa1, math::softplus(x1)) *
                       math::logistic(x1) / tau1;
    const double cold = power_term_deriv_factor(params.kappa0, math::softplus(x0)) *
                        math::logistic(x0) / tau0;
    return hot + cold;
}

double bats_cdf(double t, const BatsParams& params, double day) {
    if (!std::isfinite(t)) throw DomainError("bats_cdf: non-finite temperature");
    params.validate();
    return math::student_t_cdf(bats_transform(t, params, day), params.nu);
}

double bats_logpdf(double t, const BatsParams& params, double day) {
    const double g = bats_transform(t, params, day);
    const double dg = bats_transform_deriv(t, params, day);
    return math::student_t_logpdf(g, params.nu) + std::log(dg);
}

double bats_quantile(double p, const BatsParams& params, double day) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("bats_quantile: p must lie in (0,1)");
    params.validate();
    const auto cdf = [&](double t) {
        return math::student_t_cdf(bats_transform(t, params, day), params.nu);
    };

    // expand a bracket geometrically around the location parameters
    const double center = 0.5 * (params.phi0(day) + params.phi1(day));
    double width = 4.0 * std::max({params.tau0(day), params.tau1(day), 1.0});
    double lo = center - width;
    double hi = center + width;
    for (int i = 0; i < 400 && cdf(lo) >= p; ++i) {
        width *= 2.0;
        lo = center - width;
    }
    width = 4.0 * std::max({params.tau0(day), params.tau1(day), 1.0});
    for (int i = 0; i < 400 && cdf(hi) <= p; ++i) {
        width *= 2.0;
        hi = center + width;
    }

    double f_mid = 0.0;
    double mid = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        mid = 0.5 * (lo + hi);
        f_mid = cdf(mid);
        const double scale = std::max(1.0, std::abs(mid));
        if (std::abs(f_mid - p) <= 1e-9 && (hi - lo) <= 1e-10 * scale) break;
        if (f_mid < p) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return mid;
}

namespace {

// ---- Nelder-Mead ----------------------------------------------------------

struct SimplexResult {
    std::vector<double> x;
    double value = std::numeric_limits<double>::infinity();
    bool converged = false;
    int evaluations = 0;
};

SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> x0, double step, int max_evals) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> pts(n + 1, x0);
    std::vector<double> vals(n + 1);
    int evals = 0;
    for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += step * std::max(1.0, std::abs(x0[i]));
    for (std::size_t i = 0; i <= n; ++i) {
        vals[i] = f(pts[i]);
        ++evals;
    }

    const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
    std::vector<std::size_t> order(n + 1);
    SimplexResult result;
    while (evals < max_evals) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        const std::size_t best = order[0];
        const std::size_t worst = order[n];
        const std::size_t second_worst = order[n - 1];

        const double spread = std::abs(vals[worst] - vals[best]);
        if (spread <= 1e-10 * (std::abs(vals[best]) + 1e-10)) {
            result.converged = true;
            break;
        }

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[i][j] / n;
        }

        auto combine = [&](double coeff) {
            std::vector<double> p(n);
            for (std::size_t j = 0; j < n; ++j) {
                p[j] = centroid[j] + coeff * (centroid[j] - pts[worst][j]);
            }
            return p;
        };

        std::vector<double> refl = combine(alpha);
        const double f_refl = f(refl);
        ++evals;
        if (f_refl < vals[best]) {
            std::vector<double> exp_pt = combine(gamma);
            const double f_exp = f(exp_pt);
            ++evals;
            if (f_exp < f_refl) {
                pts[worst] = std::move(exp_pt);
                vals[worst] = f_exp;
            } else {
                pts[worst] = std::move(refl);
                vals[worst] = f_refl;
            }
        } else if (f_refl < vals[second_worst]) {
            pts[worst] = std::move(refl);
            vals[worst] = f_refl;
        } else {
            std::vector<double> con = combine(-rho);
            const double f_con = f(con);
            ++evals;
            if (f_con < vals[worst]) {
                pts[worst] = std::move(con);
                vals[worst] = f_con;
            } else {
                for (std::size_t i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    for (std::size_t j = 0; j < n; ++j) {
                        pts[i][j] = pts[best][j] + sigma * (pts[i][j] - pts[best][j]);
                    }
                    vals[i] = f(pts[i]);
                    ++evals;
                }
            }
        }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i <= n; ++i) {
        if (vals[i] < vals[best]) best = i;
    }
    result.x = pts[best];
    result.value = vals[best];
    result.evaluations = evals;
    return result;
}

// ---- parameter packing -----------------------------------------------------

constexpr int kSplineN = PeriodicCubicSpline::kCoefficients;

std::vector<double> pack(const BatsParams& p, bool seasonal) {
    std::vector<double> x;
    x.push_back(std::log(p.nu));
    x.push_back(p.kappa0);
    x.push_back(p.kappa1);
    if (!seasonal) {
        x.push_back(p.phi0(1.0));
        x.push_back(p.phi1(1.0));
        x.push_back(std::log(p.tau0(1.0)));
        x.push_back(std::log(p.tau1(1.0)));
    } else {
        for (double c : p.phi0.coefficients()) x.push_back(c);
        for (double c : p.phi1.coefficients()) x.push_back(c);
        for (double c : p.tau0.coefficients()) x.push_back(std::log(c));
        for (double c : p.tau1.coefficients()) x.push_back(std::log(c));
    }
    return x;
}

BatsParams unpack(const std::vector<double>& x, bool seasonal) {
    BatsParams p;
    p.nu = std::exp(std::clamp(x[0], -4.0, 8.0));
    p.kappa0 = x[1];
    p.kappa1 = x[2];
    if (!seasonal) {
        p.phi0 = PeriodicCubicSpline::constant(x[3]);
        p.phi1 = PeriodicCubicSpline::constant(x[4]);
        p.tau0 = PeriodicCubicSpline::constant(std::exp(std::clamp(x[5], -10.0, 10.0)));
        p.tau1 = PeriodicCubicSpline::constant(std::exp(std::clamp(x[6], -10.0, 10.0)));
    } else {
        std::array<double, kSplineN> c;
        auto grab = [&](int offset, bool log_scale) {
            for (int j = 0; j < kSplineN; ++j) {
                const double v = x[offset + j];
                c[j] = log_scale ? std::exp(std::clamp(v, -10.0, 10.0)) : v;
            }
            return PeriodicCubicSpline(c);
        };
        p.phi0 = grab(3, false);
        p.phi1 = grab(3 + kSplineN, false);
        p.tau0 = grab(3 + 2 * kSplineN, true);
        p.tau1 = grab(3 + 3 * kSplineN, true);
    }
    return p;
}

double negative_loglik(const BatsParams& p, const std::vector<BatsObservation>& samples) {
    double total = 0.0;
    for (const auto& obs : samples) {
        const double ll = bats_logpdf(obs.temp, p, obs.day);
        if (!std::isfinite(ll)) return std::numeric_limits<double>::infinity();
        total += ll;
    }
    return -total;
}

}  // namespace

BatsFitResult fit_bats_ml(const std::vector<BatsObservation>& samples,
                          const BatsFitOptions& options) {
    if (samples.size() < 200) {
        throw ArgumentError("fit_bats_ml: need at least 200 observations");
    }
    double mean = 0.0;
    for (const auto& s : samples) mean += s.temp;
    mean /= static_cast<double>(samples.size());
    double var = 0.0;
    for (const auto& s : samples) var += (s.temp - mean) * (s.temp - mean);
    var /= static_cast<double>(samples.size());
    const double sd = std::sqrt(var);
    if (!(sd > 0.0)) {
        throw FitError("fit_bats_ml: degenerate constant series");
    }

    const bool seasonal = options.seasonal;
    const auto objective = [&](const std::vector<double>& x) {
        return negative_loglik(unpack(x, seasonal), samples);
    };

    // three deterministic starts around moment estimates
    std::vector<BatsParams> starts;
    starts.push_back(BatsParams::constant(8.0, 0.2, 0.2, mean, mean, sd, sd));
    starts.push_back(BatsParams::constant(15.0, 0.05, 0.05, mean - 0.5 * sd,
                                          mean + 0.5 * sd, 0.8 * sd, 0.8 * sd));
    starts.push_back(BatsParams::constant(4.0, 0.5, 0.5, mean, mean, 1.2 * sd, 1.2 * sd));

    BatsFitResult result;
    result.init_loglik = -negative_loglik(starts.front(), samples);

    SimplexResult best;
    const int evals_per_start = options.max_evaluations / 3;
    for (const auto& start : starts) {
        std::vector<double> x0 = pack(start, seasonal);
        if (seasonal) {
            // refine the constant-spline solution first, then open the splines
            SimplexResult warm = nelder_mead(
                [&](const std::vector<double>& x) {
                    return negative_loglik(unpack(x, false), samples);
                },
                pack(start, false), 0.25, evals_per_start / 4);
            x0 = pack(unpack(warm.x, false), true);
        }
        SimplexResult r = nelder_mead(objective, x0, 0.25, evals_per_start);
        result.evaluations += r.evaluations;
        if (r.value < best.value) {
            best = std::move(r);
        }
    }

    BatsParams fitted = unpack(best.x, seasonal);
    if (options.clamp_kappa) {
        fitted.kappa0 = std::clamp(fitted.kappa0, options.kappa_min, options.kappa_max);
        fitted.kappa1 = std::clamp(fitted.kappa1, options.kappa_min, options.kappa_max);
    }
    fitted.validate();
    result.params = fitted;
    result.loglik = -negative_loglik(fitted, samples);
    result.converged = best.converged;
    if (!std::isfinite(result.loglik)) {
        throw FitError("fit_bats_ml: optimizer returned a non-finite likelihood");
    }
    return result;
}

}  // namespace gridrisk
