#include "gridrisk/copula.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <limits>
#include <sstream>

#include "gridrisk/errors.hpp"

namespace gridrisk {

Eigen::MatrixXd exponential_correlation(
    const std::vector<std::array<double, 2>>& coords, double gamma) {
    if (!(gamma > 0.0)) throw ArgumentError("exponential_correlation: gamma must be positive");
    const int n = static_cast<int>(coords.size());
    Eigen::MatrixXd r(n, n);
    for (int i = 0; i < n; ++i) {
        r(i, i) = 1.0;
        for (int j = 0; j < i; ++j) {
            const double dx = coords[i][0] - coords[j][0];
            const double dy = coords[i][1] - coords[j][1];
            const double v = std::exp(-std::sqrt(dx * dx + dy * dy) / gamma);
            r(i, j) = v;
            r(j, i) = v;
        }
    }
    return r;
}

namespace {

Eigen::MatrixXd cholesky_or_throw(const Eigen::MatrixXd& r, double gamma) {
    Eigen::LLT<Eigen::MatrixXd> llt(r);
    if (llt.info() != Eigen::Success) {
        std::ostringstream msg;
        msg << "correlation matrix is not positive definite at gamma=" << gamma
            << " (duplicate sites or an extreme length scale)";
        throw ConditioningError(msg.str());
    }
    return llt.matrixL();
}

}  // namespace

const Eigen::MatrixXd& CopulaModel::cholesky(int month) const {
    if (month < 1 || month > 12) throw ArgumentError("CopulaModel: month must be 1..12");
    return cholesky_cache[month - 1];
}

Eigen::MatrixXd CopulaModel::correlation(int month) const {
    if (month < 1 || month > 12) throw ArgumentError("CopulaModel: month must be 1..12");
    return exponential_correlation(site_coords, gamma_by_month[month - 1]);
}

CopulaModel CopulaModel::build(std::vector<std::array<double, 2>> coords,
                               const std::array<double, 12>& gammas,
                               std::string coord_units) {
    CopulaModel model;
    model.site_coords = std::move(coords);
    model.gamma_by_month = gammas;
    model.coord_units = std::move(coord_units);
    model.cholesky_cache.reserve(12);
    for (int m = 0; m < 12; ++m) {
        const Eigen::MatrixXd r = exponential_correlation(model.site_coords, gammas[m]);
        model.cholesky_cache.push_back(cholesky_or_throw(r, gammas[m]));
    }
    return model;
}

namespace {

// Gaussian log-likelihood of the pooled monthly fields at a given gamma,
// dropping the constant term.
double month_loglik(const std::vector<Eigen::VectorXd>& fields,
                    const std::vector<std::array<double, 2>>& coords, double gamma) {
    const Eigen::MatrixXd r = exponential_correlation(coords, gamma);
    Eigen::LLT<Eigen::MatrixXd> llt(r);
    if (llt.info() != Eigen::Success) {
        std::ostringstream msg;
        msg << "Cholesky failed during length-scale search at gamma=" << gamma;
        throw ConditioningError(msg.str());
    }
    const Eigen::MatrixXd l = llt.matrixL();
    double logdet = 0.0;
    for (int i = 0; i < l.rows(); ++i) logdet += 2.0 * std::log(l(i, i));
    double quad = 0.0;
    for (const auto& z : fields) {
        const Eigen::VectorXd w = l.triangularView<Eigen::Lower>().solve(z);
        quad += w.squaredNorm();
    }
    return -0.5 * quad - 0.5 * static_cast<double>(fields.size()) * logdet;
}

}  // namespace

CopulaFitResult fit_copula_lengthscale(
    const std::array<std::vector<Eigen::VectorXd>, 12>& z_fields_by_month,
    const std::vector<std::array<double, 2>>& coords,
    const CopulaFitOptions& options) {
    const int n_sites = static_cast<int>(coords.size());
    if (n_sites == 0) throw ArgumentError("fit_copula_lengthscale: no sites");
    for (int m = 0; m < 12; ++m) {
        if (static_cast<int>(z_fields_by_month[m].size()) < options.min_fields_per_month) {
            std::ostringstream msg;
            msg << "fit_copula_lengthscale: month " << (m + 1) << " has "
                << z_fields_by_month[m].size() << " fields, need at least "
                << options.min_fields_per_month;
            throw ArgumentError(msg.str());
        }
        for (const auto& z : z_fields_by_month[m]) {
            if (z.size() != n_sites) {
                throw ArgumentError("fit_copula_lengthscale: field length != site count");
            }
        }
    }

    CopulaFitResult result;
    if (n_sites == 1) {
        // a single site carries no correlation information
        std::array<double, 12> gammas;
        gammas.fill(options.default_gamma);
        result.model = CopulaModel::build(std::vector<std::array<double, 2>>(coords), gammas);
        result.single_site = true;
        return result;
    }

    double dmin = std::numeric_limits<double>::infinity();
    double dmax = 0.0;
    for (int i = 0; i < n_sites; ++i) {
        for (int j = 0; j < i; ++j) {
            const double dx = coords[i][0] - coords[j][0];
            const double dy = coords[i][1] - coords[j][1];
            const double d = std::sqrt(dx * dx + dy * dy);
            dmin = std::min(dmin, d);
            dmax = std::max(dmax, d);
        }
    }
    if (dmin == 0.0) {
        throw ConditioningError(
            "fit_copula_lengthscale: duplicate site coordinates make the "
            "correlation matrix singular at every gamma");
    }

    const double lo = std::log(dmin / 10.0);
    const double hi = std::log(dmax * 20.0);
    constexpr double kInvPhi = 0.6180339887498949;

    std::array<double, 12> gammas;
    for (int m = 0; m < 12; ++m) {
        const auto& fields = z_fields_by_month[m];
        auto value = [&](double log_gamma) {
            return -month_loglik(fields, coords, std::exp(log_gamma));
        };
        double a = lo, b = hi;
        double c = b - kInvPhi * (b - a);
        double d = a + kInvPhi * (b - a);
        double fc = value(c);
        double fd = value(d);
        for (int it = 0; it < options.search_evaluations; ++it) {
            if (fc < fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - kInvPhi * (b - a);
                fc = value(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + kInvPhi * (b - a);
                fd = value(d);
            }
        }
        const double log_gamma = 0.5 * (a + b);
        gammas[m] = std::exp(log_gamma);
        result.loglik[m] = month_loglik(fields, coords, gammas[m]);
    }

    result.model = CopulaModel::build(std::vector<std::array<double, 2>>(coords), gammas);
    return result;
}

}  // namespace gridrisk
