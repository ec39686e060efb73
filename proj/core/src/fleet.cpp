#include "gridrisk/fleet.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "gridrisk/calendar.hpp"
#include "gridrisk/errors.hpp"

namespace gridrisk {

bool is_thermal(Technology tech) {
    return tech != Technology::wind && tech != Technology::solar;
}

const char* to_string(DecisionKind kind) {
    switch (kind) {
        case DecisionKind::binary_build: return "binary_build";
        case DecisionKind::continuous_build: return "continuous_build";
        case DecisionKind::existing_fixed: return "existing_fixed";
    }
    return "?";
}

const char* to_string(Technology tech) {
    switch (tech) {
        case Technology::coal: return "coal";
        case Technology::gas_ct: return "gas_ct";
        case Technology::gas_cc: return "gas_cc";
        case Technology::nuclear: return "nuclear";
        case Technology::hydro: return "hydro";
        case Technology::wind: return "wind";
        case Technology::solar: return "solar";
        case Technology::other: return "other";
    }
    return "?";
}

DecisionKind decision_kind_from_string(const std::string& s) {
    if (s == "binary_build") return DecisionKind::binary_build;
    if (s == "continuous_build") return DecisionKind::continuous_build;
    if (s == "existing_fixed") return DecisionKind::existing_fixed;
    throw ArgumentError("unknown decision kind: " + s);
}

Technology technology_from_string(const std::string& s) {
    static const std::array<std::pair<const char*, Technology>, 8> table{{
        {"coal", Technology::coal},
        {"gas_ct", Technology::gas_ct},
        {"gas_cc", Technology::gas_cc},
        {"nuclear", Technology::nuclear},
        {"hydro", Technology::hydro},
        {"wind", Technology::wind},
        {"solar", Technology::solar},
        {"other", Technology::other},
    }};
    for (const auto& [name, tech] : table) {
        if (s == name) return tech;
    }
    throw ArgumentError("unknown technology: " + s);
}

double OutageCurve::probability_at(double temp_c) const {
    if (points.empty()) {
        throw ArgumentError("OutageCurve: empty curve");
    }
    if (points.size() == 1) {
        return std::clamp(points.front().second, 0.0, 1.0);
    }
    auto interp = [](const std::pair<double, double>& a,
                     const std::pair<double, double>& b, double t) {
        const double slope = (b.second - a.second) / (b.first - a.first);
        return a.second + slope * (t - a.first);
    };
    double p;
    if (temp_c <= points.front().first) {
        p = interp(points[0], points[1], temp_c);
    } else if (temp_c >= points.back().first) {
        p = interp(points[points.size() - 2], points.back(), temp_c);
    } else {
        std::size_t j = 1;
        while (points[j].first < temp_c) ++j;
        p = interp(points[j - 1], points[j], temp_c);
    }
    return std::clamp(p, 0.0, 1.0);
}

double CapacityProfile::value(int hour_of_year) const {
    const int h = gridrisk::hour_of_day(hour_of_year);
    const int season = season_of_month(month_of_day(day_of_hour(hour_of_year)));
    double base = default_value;
    const auto it = by_hour_of_day.find(h);
    if (it != by_hour_of_day.end()) base = it->second;
    return base * season_factor[season];
}

void GeneratorSpec::validate() const {
    if (id.empty()) throw ArgumentError("GeneratorSpec: empty id");
    if (capital_cost_per_period < 0.0 || op_cost_per_mw < 0.0) {
        throw ArgumentError("GeneratorSpec '" + id + "': negative cost");
    }
    if (capacity_profile.default_value < 0.0) {
        throw ArgumentError("GeneratorSpec '" + id + "': negative capacity");
    }
    for (const auto& [h, v] : capacity_profile.by_hour_of_day) {
        if (h < 1 || h > 24 || v < 0.0) {
            throw ArgumentError("GeneratorSpec '" + id + "': bad capacity profile entry");
        }
    }
    if (kind == DecisionKind::continuous_build && capacity_upper_bound <= 0.0) {
        throw ArgumentError("GeneratorSpec '" + id +
                            "': continuous generator needs a positive capacity bound");
    }
    if (!outage_curve.points.empty()) {
        for (std::size_t i = 1; i < outage_curve.points.size(); ++i) {
            if (outage_curve.points[i].first <= outage_curve.points[i - 1].first) {
                throw ArgumentError("GeneratorSpec '" + id +
                                    "': outage curve temperatures must increase");
            }
        }
    }
}

void Fleet::finalize() {
    binary_indices.clear();
    continuous_indices.clear();
    std::set<std::string> ids;
    for (int i = 0; i < size(); ++i) {
        const auto& g = generators[i];
        g.validate();
        if (!ids.insert(g.id).second) {
            throw ArgumentError("Fleet: duplicate generator id '" + g.id + "'");
        }
        if (g.kind == DecisionKind::binary_build) binary_indices.push_back(i);
        if (g.kind == DecisionKind::continuous_build) continuous_indices.push_back(i);
    }
}

int Fleet::find(const std::string& id) const {
    for (int i = 0; i < size(); ++i) {
        if (generators[i].id == id) return i;
    }
    return -1;
}

int thermal_availability(const GeneratorSpec& spec, double temp_c, double u) {
    if (spec.outage_curve.empty()) {
        throw ArgumentError("thermal_availability: generator '" + spec.id +
                            "' has no outage curve");
    }
    return u > spec.outage_curve.probability_at(temp_c) ? 1 : 0;
}

double wind_derate(double temp_f, double k, double u_normal, WindInterp interp) {
    if (!std::isfinite(temp_f)) throw DomainError("wind_derate: non-finite temperature");
    if (temp_f >= -20.0) return 1.0;
    if (temp_f <= -30.0) return 0.0;
    const double q = interp == WindInterp::linear ? (temp_f + 30.0) / 10.0
                                                  : 0.1 * (temp_f + 20.0) / (31.0 + temp_f);
    return std::clamp(q + q * (1.0 - q) * k * u_normal, 0.0, 1.0);
}

double solar_derate(double temp_c, double capacity_factor) {
    if (capacity_factor < 0.0) throw ArgumentError("solar_derate: negative capacity factor");
    constexpr double kCellHeating = 25.0 / 144.0;  // deg C gained per unit capacity factor
    constexpr double kTempCoeff = 0.005;           // efficiency loss per deg C above 25
    const double z = 1.0 - (temp_c - 25.0 + kCellHeating * capacity_factor) * kTempCoeff;
    return std::max(z, 0.0);
}

}  // namespace gridrisk
