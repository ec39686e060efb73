#pragma once

#include <cstdint>
#include <vector>

#include "gridrisk/demand.hpp"
#include "gridrisk/fleet.hpp"
#include "gridrisk/temperature.hpp"

namespace gridrisk {

// One realization of the uncertain inputs: hour of year, the temperature
// field, per-generator availability factors, and total demand.
struct Scenario {
    int hour = 0;              // hour of year
    TemperatureField temps;
    std::vector<double> z;     // availability factor per generator, fleet order
    double demand = 0.0;       // MW
};

enum class HourMode { normal, extreme };

// Stratified hour sampling over the even hours of the year: four seasonal
// strata in normal mode, the two coldest and two hottest months (Jan, Feb,
// Jul, Aug) in extreme mode. n must divide evenly across strata.
std::vector<int> sample_hours(HourMode mode, int n, std::uint64_t seed);

struct ScenarioGenOptions {
    double wind_k = 0.1;
    WindInterp wind_interp = WindInterp::verbatim;
};

// Attaches generator availability and demand to sampled temperature fields;
// one scenario per field, in order. Draws are independent across generators
// given the temperatures.
std::vector<Scenario> build_scenarios(const Fleet& fleet, const DemandModel& demand,
                                      const std::vector<TemperatureField>& fields,
                                      std::uint64_t seed,
                                      const ScenarioGenOptions& options = {});

}  // namespace gridrisk
