#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gridrisk/pareto.hpp"
#include "gridrisk/prop1.hpp"

namespace gridrisk::io {

using MarginalsByHour = std::map<int, std::vector<BatsParams>>;

// JSON parameter files; every document carries schema_version and units.
Fleet read_fleet(const std::string& path);
void write_fleet(const Fleet& fleet, const std::string& path);

MarginalsByHour read_marginals(const std::string& path);
void write_marginals(const MarginalsByHour& marginals, const std::string& path);

CopulaModel read_copula(const std::string& path);
void write_copula(const CopulaModel& model, const std::string& path);

// Site coordinate list ({"site_coords": [[x, y], ...]}, units declared).
std::vector<std::array<double, 2>> read_site_coords(const std::string& path);

DemandModel read_demand_model(const std::string& path);
void write_demand_model(const DemandModel& model, const std::string& path);

// Temperature sample CSV: scenario_id,hour,day,site_0..site_{L-1}; deg C at
// six decimals.
void write_temperature_csv(const std::vector<TemperatureField>& fields,
                           const std::string& path);
std::vector<TemperatureField> read_temperature_csv(const std::string& path);

// Scenario CSV scenario_id,hour,D,z_<gen_id>... plus the temperature sidecar;
// both round-trip losslessly at six decimals.
void write_scenarios_csv(const std::vector<Scenario>& scenarios, const Fleet& fleet,
                         const std::string& path, const std::string& temps_path);
std::vector<Scenario> read_scenarios_csv(const Fleet& fleet, const std::string& path,
                                         const std::string& temps_path);

// Generated solutions with provenance.
void write_solutions(const std::vector<GeneratedSolution>& solutions, const Fleet& fleet,
                     const std::string& path);
std::vector<GeneratedSolution> read_solutions(const Fleet& fleet, const std::string& path);

// Evaluated results table.
void write_results_csv(const std::vector<ParetoPoint>& points, const std::string& path);

void write_prop1_report(const Prop1Report& report, const std::string& path);

struct Manifest {
    std::string command;
    std::uint64_t seed = 0;
    std::string config_hash;
    std::string version;
    std::map<std::string, double> numbers;
    std::map<std::string, std::string> strings;
};

void write_manifest(const Manifest& manifest, const std::string& path);

}  // namespace gridrisk::io
