#include "gridrisk/demand.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gridrisk/calendar.hpp"
#include "gridrisk/errors.hpp"
#include "gridrisk/math.hpp"
#include "gridrisk/temperature.hpp"

namespace gridrisk {

const std::array<const char*, DemandFeatures::kCount>& DemandFeatures::names() {
    static const std::array<const char*, kCount> kNames = {
        "intercept",
        "season_spring", "season_summer", "season_fall",
        "t_hot_winter", "t_hot_spring", "t_hot_summer", "t_hot_fall",
        "t_cold_winter", "t_cold_spring", "t_cold_summer", "t_cold_fall",
        "t2_hot_winter", "t2_hot_spring", "t2_hot_summer", "t2_hot_fall",
        "t2_cold_winter", "t2_cold_spring", "t2_cold_summer", "t2_cold_fall",
        "t_hot_hour", "t_cold_hour", "t2_hot_hour", "t2_cold_hour",
        "weekday_hour", "weekend_hour",
    };
    return kNames;
}

std::array<double, DemandFeatures::kCount> DemandFeatures::build(int hour_of_day,
                                                                 int season,
                                                                 double temp_c,
                                                                 bool weekday) {
    const double tf = math::celsius_to_fahrenheit(temp_c);
    const double hot = tf >= 65.0 ? 1.0 : 0.0;
    const double cold = 1.0 - hot;
    const double h = static_cast<double>(hour_of_day);
    std::array<double, kCount> x{};
    x[0] = 1.0;
    if (season >= 1 && season <= 3) x[season] = 1.0;
    for (int s = 0; s < 4; ++s) {
        const double in_season = season == s ? 1.0 : 0.0;
        x[4 + s] = tf * hot * in_season;
        x[8 + s] = tf * cold * in_season;
        x[12 + s] = tf * tf * hot * in_season;
        x[16 + s] = tf * tf * cold * in_season;
    }
    x[20] = tf * hot * h;
    x[21] = tf * cold * h;
    x[22] = tf * tf * hot * h;
    x[23] = tf * tf * cold * h;
    x[24] = weekday ? h : 0.0;
    x[25] = weekday ? 0.0 : h;
    return x;
}

DemandModel fit_demand_regression(const std::vector<DemandRecord>& history,
                                  int site_count, const DemandFitOptions& options) {
    if (site_count <= 0) throw ArgumentError("fit_demand_regression: site_count must be positive");
    constexpr int p = DemandFeatures::kCount;

    std::vector<std::vector<const DemandRecord*>> per_site(site_count);
    for (const auto& rec : history) {
        if (rec.site < 0 || rec.site >= site_count) {
            throw ArgumentError("fit_demand_regression: record for unknown site");
        }
        per_site[rec.site].push_back(&rec);
    }

    DemandModel model;
    model.sites.resize(site_count);
    for (int site = 0; site < site_count; ++site) {
        const auto& recs = per_site[site];
        const int n = static_cast<int>(recs.size());
        if (n < 2 * p) {
            std::ostringstream msg;
            msg << "fit_demand_regression: site " << site << " has " << n
                << " records, need at least " << 2 * p;
            throw FitError(msg.str());
        }
        Eigen::MatrixXd design(n, p);
        Eigen::VectorXd y(n);
        for (int r = 0; r < n; ++r) {
            const auto& rec = *recs[r];
            const int h = hour_of_day(rec.hour_of_year);
            const int season = season_of_month(month_of_day(day_of_hour(rec.hour_of_year)));
            const auto x = DemandFeatures::build(h, season, rec.temp_c, rec.weekday);
            for (int c = 0; c < p; ++c) design(r, c) = x[c];
            y(r) = rec.load_mw;
        }

        // all-zero columns are always degenerate; everything else is judged by
        // the pivoted QR rank
        std::vector<int> zero_cols;
        for (int c = 0; c < p; ++c) {
            if (design.col(c).cwiseAbs().maxCoeff() == 0.0) zero_cols.push_back(c);
        }
        std::vector<int> active;
        for (int c = 0; c < p; ++c) {
            if (std::find(zero_cols.begin(), zero_cols.end(), c) == zero_cols.end()) {
                active.push_back(c);
            }
        }
        Eigen::MatrixXd reduced(n, active.size());
        for (std::size_t c = 0; c < active.size(); ++c) reduced.col(c) = design.col(active[c]);

        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(reduced);
        qr.setThreshold(1e-10);
        std::vector<int> collinear;
        if (qr.rank() < static_cast<Eigen::Index>(active.size())) {
            const auto& perm = qr.colsPermutation().indices();
            for (Eigen::Index j = qr.rank(); j < perm.size(); ++j) {
                collinear.push_back(active[perm(j)]);
            }
        }

        std::vector<int> degenerate = zero_cols;
        degenerate.insert(degenerate.end(), collinear.begin(), collinear.end());
        std::sort(degenerate.begin(), degenerate.end());

        SiteRegression fit;
        fit.beta = Eigen::VectorXd::Zero(p);
        if (!degenerate.empty()) {
            std::ostringstream names;
            for (std::size_t i = 0; i < degenerate.size(); ++i) {
                if (i) names << ", ";
                names << DemandFeatures::names()[degenerate[i]];
            }
            if (!options.drop_collinear) {
                std::ostringstream msg;
                msg << "fit_demand_regression: site " << site
                    << " design matrix is rank deficient; offending features: "
                    << names.str();
                throw FitError(msg.str());
            }
            for (int c : degenerate) fit.dropped_features.push_back(DemandFeatures::names()[c]);
            std::vector<int> keep;
            for (int c : active) {
                if (std::find(collinear.begin(), collinear.end(), c) == collinear.end()) {
                    keep.push_back(c);
                }
            }
            Eigen::MatrixXd kept(n, keep.size());
            for (std::size_t c = 0; c < keep.size(); ++c) kept.col(c) = design.col(keep[c]);
            const Eigen::VectorXd beta = kept.colPivHouseholderQr().solve(y);
            for (std::size_t c = 0; c < keep.size(); ++c) fit.beta(keep[c]) = beta(c);
        } else {
            const Eigen::VectorXd beta = qr.solve(y);
            for (std::size_t c = 0; c < active.size(); ++c) fit.beta(active[c]) = beta(c);
        }

        const double ss_res = (y - design * fit.beta).squaredNorm();
        const double mean = y.mean();
        const double ss_tot = (y.array() - mean).matrix().squaredNorm();
        fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res < 1e-12 ? 1.0 : 0.0);
        model.sites[site] = std::move(fit);
    }
    return model;
}

double predict_site_demand(const DemandModel& model, int site, int hour_of_year,
                           double temp_c) {
    if (site < 0 || site >= model.site_count()) {
        throw ArgumentError("predict_site_demand: unknown site");
    }
    const int h = hour_of_day(hour_of_year);
    const int season = season_of_month(month_of_day(day_of_hour(hour_of_year)));
    const auto x = DemandFeatures::build(h, season, temp_c, model.weekday_policy);
    double value = 0.0;
    for (int c = 0; c < DemandFeatures::kCount; ++c) value += x[c] * model.sites[site].beta(c);
    return std::max(value, 0.0);
}

double predict_demand(const DemandModel& model, int hour_of_year,
                      const TemperatureField& temps) {
    if (static_cast<int>(temps.values.size()) != model.site_count()) {
        throw ArgumentError("predict_demand: temperature field size does not match site count");
    }
    double total = 0.0;
    for (int site = 0; site < model.site_count(); ++site) {
        total += predict_site_demand(model, site, hour_of_year, temps.values[site]);
    }
    return total;
}

}  // namespace gridrisk
