#pragma once

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace gridrisk {

enum class DecisionKind { binary_build, continuous_build, existing_fixed };

enum class Technology { coal, gas_ct, gas_cc, nuclear, hydro, wind, solar, other };

bool is_thermal(Technology tech);  // everything except wind and solar

const char* to_string(DecisionKind kind);
const char* to_string(Technology tech);
DecisionKind decision_kind_from_string(const std::string& s);
Technology technology_from_string(const std::string& s);

// Piecewise-linear forced-outage probability as a function of local
// temperature (deg C). Linear interpolation between points, linear
// extrapolation using the slope of the two outermost points, result clamped
// to [0, 1].
struct OutageCurve {
    std::vector<std::pair<double, double>> points;  // (temp C, outage prob), sorted by temp

    double probability_at(double temp_c) const;
    bool empty() const { return points.empty(); }
};

// Baseline capacity by hour of year: a default value, an optional map over
// the hour of day, and per-season multipliers.
struct CapacityProfile {
    double default_value = 0.0;
    std::map<int, double> by_hour_of_day;
    std::array<double, 4> season_factor{1.0, 1.0, 1.0, 1.0};

    double value(int hour_of_year) const;
};

struct GeneratorSpec {
    std::string id;
    DecisionKind kind = DecisionKind::binary_build;
    Technology tech = Technology::other;
    int site_index = 0;
    double capital_cost_per_period = 0.0;  // $/period (amortized)
    double op_cost_per_mw = 0.0;           // $/MWh
    CapacityProfile capacity_profile;      // MW for binary/existing, factor for continuous
    double capacity_upper_bound = 0.0;     // MW, continuous kind only
    OutageCurve outage_curve;              // thermal technologies

    void validate() const;
};

struct Fleet {
    std::vector<GeneratorSpec> generators;

    std::vector<int> binary_indices;      // positions of binary_build generators
    std::vector<int> continuous_indices;  // positions of continuous_build generators

    void finalize();  // builds the index lists, validates specs and unique ids
    int size() const { return static_cast<int>(generators.size()); }
    int find(const std::string& id) const;  // -1 if absent
};

// Bernoulli availability of a thermal unit: 1 iff the uniform draw exceeds the
// temperature-dependent outage probability.
int thermal_availability(const GeneratorSpec& spec, double temp_c, double u);

enum class WindInterp { verbatim, linear };

// Cold-weather wind de-rating. With `verbatim`, the published mean
// q = 0.1 (T + 20) / (31 + T) is used as printed (negative on the active
// range) and the result is clamped to [0, 1]; `linear` substitutes
// q = (T + 30) / 10.
double wind_derate(double temp_f, double k, double u_normal,
                   WindInterp interp = WindInterp::verbatim);

// Temperature correction of photovoltaic output; can exceed 1 in cold air.
double solar_derate(double temp_c, double capacity_factor);

}  // namespace gridrisk
