#include "gridrisk/scenario.hpp"

#include <algorithm>
#include <array>

#include "gridrisk/calendar.hpp"
#include "gridrisk/errors.hpp"
#include "gridrisk/math.hpp"
#include "gridrisk/rng.hpp"

namespace gridrisk {

namespace {
constexpr std::array<int, 12> kDaysInMonth = {31, 28, 31, 30, 31, 30,
                                              31, 31, 30, 31, 30, 31};
}

int month_of_day(int day_of_year) {
    if (day_of_year < 1 || day_of_year > 365) {
        throw ArgumentError("month_of_day: day must lie in 1..365");
    }
    int d = day_of_year;
    for (int m = 0; m < 12; ++m) {
        if (d <= kDaysInMonth[m]) return m + 1;
        d -= kDaysInMonth[m];
    }
    return 12;
}

int season_of_month(int month) {
    if (month < 1 || month > 12) throw ArgumentError("season_of_month: month must lie in 1..12");
    if (month == 12 || month <= 2) return 0;  // winter
    if (month <= 5) return 1;                 // spring
    if (month <= 8) return 2;                 // summer
    return 3;                                 // fall
}

int day_of_hour(int hour_of_year) {
    if (hour_of_year < 1 || hour_of_year > 8760) {
        throw ArgumentError("day_of_hour: hour must lie in 1..8760");
    }
    return (hour_of_year - 1) / 24 + 1;
}

int hour_of_day(int hour_of_year) {
    return hour_of_year - (day_of_hour(hour_of_year) - 1) * 24;
}

int hour_of_year(int day_of_year, int hour_of_day) {
    if (day_of_year < 1 || day_of_year > 365 || hour_of_day < 1 || hour_of_day > 24) {
        throw ArgumentError("hour_of_year: out-of-range day or hour");
    }
    return (day_of_year - 1) * 24 + hour_of_day;
}

std::vector<int> sample_hours(HourMode mode, int n, std::uint64_t seed) {
    // stratum pools of even hours
    std::vector<std::vector<int>> pools;
    if (mode == HourMode::normal) {
        pools.resize(4);
        for (int day = 1; day <= 365; ++day) {
            const int season = season_of_month(month_of_day(day));
            for (int h = 2; h <= 24; h += 2) {
                pools[season].push_back(hour_of_year(day, h));
            }
        }
    } else {
        static const std::array<int, 4> kExtremeMonths = {1, 2, 7, 8};
        pools.resize(4);
        for (int day = 1; day <= 365; ++day) {
            const int month = month_of_day(day);
            const auto it = std::find(kExtremeMonths.begin(), kExtremeMonths.end(), month);
            if (it == kExtremeMonths.end()) continue;
            const int stratum = static_cast<int>(it - kExtremeMonths.begin());
            for (int h = 2; h <= 24; h += 2) {
                pools[stratum].push_back(hour_of_year(day, h));
            }
        }
    }

    const int strata = static_cast<int>(pools.size());
    if (n <= 0 || n % strata != 0) {
        throw ArgumentError("sample_hours: n must be a positive multiple of the stratum count");
    }
    const int per_stratum = n / strata;
    std::vector<int> hours;
    hours.reserve(n);
    for (int s = 0; s < strata; ++s) {
        Rng rng(substream(seed, SeedSpace::scenario, 0x48u, static_cast<std::uint64_t>(s)));
        for (int k = 0; k < per_stratum; ++k) {
            hours.push_back(pools[s][rng.below(pools[s].size())]);
        }
    }
    return hours;
}

std::vector<Scenario> build_scenarios(const Fleet& fleet, const DemandModel& demand,
                                      const std::vector<TemperatureField>& fields,
                                      std::uint64_t seed,
                                      const ScenarioGenOptions& options) {
    std::vector<Scenario> scenarios(fields.size());
    for (std::size_t k = 0; k < fields.size(); ++k) {
        const TemperatureField& field = fields[k];
        const int sites = static_cast<int>(field.values.size());
        if (sites != demand.site_count()) {
            throw ArgumentError("build_scenarios: field size does not match demand model");
        }
        Scenario s;
        s.hour = hour_of_year(field.day_of_year, field.hour_of_day);
        s.temps = field;
        s.z.resize(fleet.size());
        Rng rng(substream(seed, SeedSpace::scenario, 0x5cu, k));
        for (int i = 0; i < fleet.size(); ++i) {
            const auto& gen = fleet.generators[i];
            if (gen.site_index < 0 || gen.site_index >= sites) {
                throw ArgumentError("build_scenarios: generator '" + gen.id +
                                    "' references site outside the temperature field");
            }
            const double temp_c = field.values[gen.site_index];
            switch (gen.tech) {
                case Technology::wind:
                    s.z[i] = wind_derate(math::celsius_to_fahrenheit(temp_c),
                                         options.wind_k, rng.normal(), options.wind_interp);
                    break;
                case Technology::solar:
                    s.z[i] = solar_derate(temp_c, gen.capacity_profile.value(s.hour));
                    break;
                default:
                    s.z[i] = thermal_availability(gen, temp_c, rng.uniform01());
                    break;
            }
        }
        s.demand = predict_demand(demand, s.hour, field);
        scenarios[k] = std::move(s);
    }
    return scenarios;
}

}  // namespace gridrisk
