#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

namespace gridrisk {

struct TemperatureField;

// Per-site load regression. The temperature enters in deg F with a 65 F
// split: separate linear and quadratic responses above and below the split,
// interacted with season and hour of day. Season is one-hot with winter as
// the reference level next to a global intercept.
struct DemandFeatures {
    static constexpr int kCount = 26;
    static const std::array<const char*, kCount>& names();
    static std::array<double, kCount> build(int hour_of_day, int season,
                                            double temp_c, bool weekday);
};

struct SiteRegression {
    Eigen::VectorXd beta;  // length DemandFeatures::kCount, zeros for dropped columns
    double r2 = 0.0;
    std::vector<std::string> dropped_features;
};

struct DemandModel {
    std::vector<SiteRegression> sites;
    bool weekday_policy = true;  // generated scenarios are treated as weekdays

    int site_count() const { return static_cast<int>(sites.size()); }
};

struct DemandRecord {
    int site = 0;
    int hour_of_year = 0;
    double temp_c = 0.0;
    double load_mw = 0.0;
    bool weekday = true;
};

struct DemandFitOptions {
    // when true, exactly collinear or all-zero columns are dropped and
    // recorded instead of raising a fit error
    bool drop_collinear = false;
};

// Per-site least squares. Throws FitError naming the offending features on a
// rank-deficient design unless options.drop_collinear is set.
DemandModel fit_demand_regression(const std::vector<DemandRecord>& history,
                                  int site_count,
                                  const DemandFitOptions& options = {});

double predict_site_demand(const DemandModel& model, int site, int hour_of_year,
                           double temp_c);

// Total system demand: sum over sites of the per-site prediction floored at 0.
double predict_demand(const DemandModel& model, int hour_of_year,
                      const TemperatureField& temps);

}  // namespace gridrisk
