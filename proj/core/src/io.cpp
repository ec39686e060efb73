#include "gridrisk/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gridrisk/calendar.hpp"
#include "gridrisk/errors.hpp"

namespace gridrisk::io {

using nlohmann::json;

namespace {

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ConfigError("malformed JSON in " + path + ": " + e.what());
    }
    return doc;
}

void save_json(const json& doc, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out << doc.dump(2) << '\n';
}

void check_schema(const json& doc, const std::string& path) {
    if (!doc.contains("schema_version") || doc["schema_version"].get<int>() != 1) {
        throw ConfigError(path + ": missing or unsupported schema_version");
    }
}

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(field);
    return out;
}

json spline_to_json(const PeriodicCubicSpline& s) {
    return json(s.coefficients());
}

PeriodicCubicSpline spline_from_json(const json& j) {
    std::array<double, PeriodicCubicSpline::kCoefficients> c;
    if (j.size() != c.size()) throw ConfigError("spline coefficient vector must have 9 entries");
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = j[i].get<double>();
    return PeriodicCubicSpline(c);
}

}  // namespace

// ---- fleet -----------------------------------------------------------------

Fleet read_fleet(const std::string& path) {
    const json doc = load_json(path);
    check_schema(doc, path);
    Fleet fleet;
    for (const auto& g : doc.at("generators")) {
        GeneratorSpec spec;
        spec.id = g.at("id").get<std::string>();
        spec.kind = decision_kind_from_string(g.at("kind").get<std::string>());
        spec.tech = technology_from_string(g.at("technology").get<std::string>());
        spec.site_index = g.at("site_index").get<int>();
        spec.capital_cost_per_period = g.at("capital_cost_per_period").get<double>();
        spec.op_cost_per_mw = g.at("op_cost_per_mw").get<double>();
        const auto& profile = g.at("capacity_profile");
        spec.capacity_profile.default_value = profile.at("default").get<double>();
        if (profile.contains("by_hour_of_day")) {
            for (const auto& [h, v] : profile["by_hour_of_day"].items()) {
                spec.capacity_profile.by_hour_of_day[std::stoi(h)] = v.get<double>();
            }
        }
        if (profile.contains("season_factor")) {
            const auto& sf = profile["season_factor"];
            for (int s = 0; s < 4; ++s) spec.capacity_profile.season_factor[s] = sf[s].get<double>();
        }
        if (g.contains("capacity_upper_bound")) {
            spec.capacity_upper_bound = g["capacity_upper_bound"].get<double>();
        }
        if (g.contains("outage_curve")) {
            for (const auto& pt : g["outage_curve"]) {
                spec.outage_curve.points.emplace_back(pt[0].get<double>(), pt[1].get<double>());
            }
        }
        fleet.generators.push_back(std::move(spec));
    }
    fleet.finalize();
    return fleet;
}

void write_fleet(const Fleet& fleet, const std::string& path) {
    json doc;
    doc["schema_version"] = 1;
    doc["units"] = {{"capacity", "MW"},
                    {"capital_cost", "USD/period"},
                    {"op_cost", "USD/MWh"},
                    {"temperature", "C"}};
    json gens = json::array();
    for (const auto& g : fleet.generators) {
        json spec;
        spec["id"] = g.id;
        spec["kind"] = to_string(g.kind);
        spec["technology"] = to_string(g.tech);
        spec["site_index"] = g.site_index;
        spec["capital_cost_per_period"] = g.capital_cost_per_period;
        spec["op_cost_per_mw"] = g.op_cost_per_mw;
        json profile;
        profile["default"] = g.capacity_profile.default_value;
        if (!g.capacity_profile.by_hour_of_day.empty()) {
            json by_hour;
            for (const auto& [h, v] : g.capacity_profile.by_hour_of_day) {
                by_hour[std::to_string(h)] = v;
            }
            profile["by_hour_of_day"] = by_hour;
        }
        profile["season_factor"] = g.capacity_profile.season_factor;
        spec["capacity_profile"] = profile;
        if (g.kind == DecisionKind::continuous_build) {
            spec["capacity_upper_bound"] = g.capacity_upper_bound;
        }
        if (!g.outage_curve.points.empty()) {
            json curve = json::array();
            for (const auto& [t, p] : g.outage_curve.points) curve.push_back({t, p});
            spec["outage_curve"] = curve;
        }
        gens.push_back(std::move(spec));
    }
    doc["generators"] = std::move(gens);
    save_json(doc, path);
}

// ---- marginals ---------------------------------------------------------------

MarginalsByHour read_marginals(const std::string& path) {
    const json doc = load_json(path);
    check_schema(doc, path);
    MarginalsByHour out;
    for (const auto& block : doc.at("hours")) {
        const int hour = block.at("hour_of_day").get<int>();
        std::vector<BatsParams> sites;
        for (const auto& s : block.at("sites")) {
            BatsParams p;
            p.nu = s.at("nu").get<double>();
            p.kappa0 = s.at("kappa0").get<double>();
            p.kappa1 = s.at("kappa1").get<double>();
            p.phi0 = spline_from_json(s.at("phi0_spline"));
            p.phi1 = spline_from_json(s.at("phi1_spline"));
            p.tau0 = spline_from_json(s.at("tau0_spline"));
            p.tau1 = spline_from_json(s.at("tau1_spline"));
            p.validate();
            sites.push_back(std::move(p));
        }
        out[hour] = std::move(sites);
    }
    return out;
}

void write_marginals(const MarginalsByHour& marginals, const std::string& path) {
    json doc;
    doc["schema_version"] = 1;
    doc["units"] = {{"temperature", "C"}, {"day", "day-of-year 1..365"}};
    json hours = json::array();
    for (const auto& [hour, sites] : marginals) {
        json block;
        block["hour_of_day"] = hour;
        json site_list = json::array();
        for (const auto& p : sites) {
            json s;
            s["nu"] = p.nu;
            s["kappa0"] = p.kappa0;
            s["kappa1"] = p.kappa1;
            s["phi0_spline"] = spline_to_json(p.phi0);
            s["phi1_spline"] = spline_to_json(p.phi1);
            s["tau0_spline"] = spline_to_json(p.tau0);
            s["tau1_spline"] = spline_to_json(p.tau1);
            site_list.push_back(std::move(s));
        }
        block["sites"] = std::move(site_list);
        hours.push_back(std::move(block));
    }
    doc["hours"] = std::move(hours);
    save_json(doc, path);
}

// ---- copula ------------------------------------------------------------------

CopulaModel read_copula(const std::string& path) {
    const json doc = load_json(path);
    check_schema(doc, path);
    std::vector<std::array<double, 2>> coords;
    for (const auto& c : doc.at("site_coords")) {
        coords.push_back({c[0].get<double>(), c[1].get<double>()});
    }
    std::array<double, 12> gammas;
    const auto& g = doc.at("gamma_by_month");
    if (g.size() != 12) throw ConfigError(path + ": gamma_by_month must have 12 entries");
    for (int m = 0; m < 12; ++m) gammas[m] = g[m].get<double>();
    std::string units = "km";
    if (doc.contains("units") && doc["units"].contains("coords")) {
        units = doc["units"]["coords"].get<std::string>();
    }
    return CopulaModel::build(std::move(coords), gammas, units);
}

std::vector<std::array<double, 2>> read_site_coords(const std::string& path) {
    const json doc = load_json(path);
    check_schema(doc, path);
    std::vector<std::array<double, 2>> coords;
    for (const auto& c : doc.at("site_coords")) {
        coords.push_back({c[0].get<double>(), c[1].get<double>()});
    }
    return coords;
}

void write_copula(const CopulaModel& model, const std::string& path) {
    json doc;
    doc["schema_version"] = 1;
    doc["units"] = {{"coords", model.coord_units}};
    json coords = json::array();
    for (const auto& c : model.site_coords) coords.push_back({c[0], c[1]});
    doc["site_coords"] = std::move(coords);
    doc["gamma_by_month"] = model.gamma_by_month;
    save_json(doc, path);
}

// ---- demand model --------------------------------------------------------------

DemandModel read_demand_model(const std::string& path) {
    const json doc = load_json(path);
    check_schema(doc, path);
    DemandModel model;
    model.weekday_policy = doc.value("weekday_policy", true);
    for (const auto& s : doc.at("sites")) {
        SiteRegression reg;
        reg.beta = Eigen::VectorXd::Zero(DemandFeatures::kCount);
        const auto& coeffs = s.at("coefficients");
        for (int c = 0; c < DemandFeatures::kCount; ++c) {
            const char* name = DemandFeatures::names()[c];
            if (coeffs.contains(name)) reg.beta(c) = coeffs[name].get<double>();
        }
        reg.r2 = s.value("r2", 0.0);
        if (s.contains("dropped_features")) {
            for (const auto& d : s["dropped_features"]) {
                reg.dropped_features.push_back(d.get<std::string>());
            }
        }
        model.sites.push_back(std::move(reg));
    }
    return model;
}

void write_demand_model(const DemandModel& model, const std::string& path) {
    json doc;
    doc["schema_version"] = 1;
    doc["units"] = {{"load", "MW"}, {"temperature_features", "F"}};
    doc["weekday_policy"] = model.weekday_policy;
    json sites = json::array();
    for (const auto& reg : model.sites) {
        json s;
        json coeffs;
        for (int c = 0; c < DemandFeatures::kCount; ++c) {
            if (reg.beta(c) != 0.0) coeffs[DemandFeatures::names()[c]] = reg.beta(c);
        }
        s["coefficients"] = coeffs.is_null() ? json::object() : coeffs;
        s["r2"] = reg.r2;
        if (!reg.dropped_features.empty()) s["dropped_features"] = reg.dropped_features;
        sites.push_back(std::move(s));
    }
    doc["sites"] = std::move(sites);
    save_json(doc, path);
}

// ---- temperature CSV -----------------------------------------------------------

void write_temperature_csv(const std::vector<TemperatureField>& fields,
                           const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out << "# units: temperature=C\n";
    const int sites = fields.empty() ? 0 : static_cast<int>(fields.front().values.size());
    out << "scenario_id,hour,day";
    for (int l = 0; l < sites; ++l) out << ",site_" << l;
    out << '\n';
    for (std::size_t k = 0; k < fields.size(); ++k) {
        out << k << ',' << fields[k].hour_of_day << ',' << fields[k].day_of_year;
        for (double v : fields[k].values) out << ',' << fmt6(v);
        out << '\n';
    }
}

std::vector<TemperatureField> read_temperature_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    std::string line;
    std::vector<TemperatureField> fields;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        const auto cells = split_csv_line(line);
        if (cells.size() < 3) throw ConfigError(path + ": short row");
        TemperatureField f;
        f.hour_of_day = std::stoi(cells[1]);
        f.day_of_year = std::stoi(cells[2]);
        for (std::size_t c = 3; c < cells.size(); ++c) f.values.push_back(std::stod(cells[c]));
        fields.push_back(std::move(f));
    }
    return fields;
}

// ---- scenario CSV ---------------------------------------------------------------

void write_scenarios_csv(const std::vector<Scenario>& scenarios, const Fleet& fleet,
                         const std::string& path, const std::string& temps_path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out << "# units: D=MW,z=availability factor\n";
    out << "scenario_id,hour,D";
    for (const auto& g : fleet.generators) out << ",z_" << g.id;
    out << '\n';
    std::vector<TemperatureField> temps;
    temps.reserve(scenarios.size());
    for (std::size_t k = 0; k < scenarios.size(); ++k) {
        const Scenario& s = scenarios[k];
        out << k << ',' << s.hour << ',' << fmt6(s.demand);
        for (double z : s.z) out << ',' << fmt6(z);
        out << '\n';
        temps.push_back(s.temps);
    }
    write_temperature_csv(temps, temps_path);
}

std::vector<Scenario> read_scenarios_csv(const Fleet& fleet, const std::string& path,
                                         const std::string& temps_path) {
    const std::vector<TemperatureField> temps = read_temperature_csv(temps_path);
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    std::string line;
    std::vector<int> col_to_gen;
    std::vector<Scenario> scenarios;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto cells = split_csv_line(line);
        if (!header_seen) {
            header_seen = true;
            for (std::size_t c = 3; c < cells.size(); ++c) {
                const std::string& name = cells[c];
                if (name.rfind("z_", 0) != 0) throw ConfigError(path + ": bad z column " + name);
                const int gen = fleet.find(name.substr(2));
                if (gen < 0) throw ConfigError(path + ": unknown generator " + name.substr(2));
                col_to_gen.push_back(gen);
            }
            continue;
        }
        Scenario s;
        const std::size_t k = scenarios.size();
        s.hour = std::stoi(cells[1]);
        s.demand = std::stod(cells[2]);
        s.z.assign(fleet.size(), 0.0);
        for (std::size_t c = 3; c < cells.size(); ++c) {
            s.z[col_to_gen[c - 3]] = std::stod(cells[c]);
        }
        if (k < temps.size()) s.temps = temps[k];
        scenarios.push_back(std::move(s));
    }
    return scenarios;
}

// ---- solutions -------------------------------------------------------------------

void write_solutions(const std::vector<GeneratedSolution>& solutions, const Fleet& fleet,
                     const std::string& path) {
    json doc;
    doc["schema_version"] = 1;
    doc["units"] = {{"capacity", "MW"}};
    json list = json::array();
    for (const auto& gs : solutions) {
        json s;
        json build;
        for (std::size_t slot = 0; slot < fleet.binary_indices.size(); ++slot) {
            build[fleet.generators[fleet.binary_indices[slot]].id] = gs.decision.build[slot];
        }
        json capacity;
        for (std::size_t slot = 0; slot < fleet.continuous_indices.size(); ++slot) {
            capacity[fleet.generators[fleet.continuous_indices[slot]].id] =
                gs.decision.capacity[slot];
        }
        s["build"] = build.is_null() ? json::object() : build;
        s["capacity"] = capacity.is_null() ? json::object() : capacity;
        s["provenance"] = {{"model_family", to_string(gs.prov.family)},
                           {"sweep_value", gs.prov.sweep_value},
                           {"seed", gs.prov.seed},
                           {"replication", gs.prov.replication},
                           {"status", to_string(gs.prov.status)},
                           {"objective", gs.prov.objective}};
        list.push_back(std::move(s));
    }
    doc["solutions"] = std::move(list);
    save_json(doc, path);
}

std::vector<GeneratedSolution> read_solutions(const Fleet& fleet, const std::string& path) {
    const json doc = load_json(path);
    check_schema(doc, path);
    std::vector<GeneratedSolution> out;
    for (const auto& s : doc.at("solutions")) {
        GeneratedSolution gs;
        gs.decision.build.assign(fleet.binary_indices.size(), 0);
        gs.decision.capacity.assign(fleet.continuous_indices.size(), 0.0);
        for (std::size_t slot = 0; slot < fleet.binary_indices.size(); ++slot) {
            const std::string& id = fleet.generators[fleet.binary_indices[slot]].id;
            gs.decision.build[slot] = s.at("build").value(id, 0);
        }
        for (std::size_t slot = 0; slot < fleet.continuous_indices.size(); ++slot) {
            const std::string& id = fleet.generators[fleet.continuous_indices[slot]].id;
            gs.decision.capacity[slot] = s.at("capacity").value(id, 0.0);
        }
        const auto& prov = s.at("provenance");
        gs.prov.family = model_family_from_string(prov.at("model_family").get<std::string>());
        gs.prov.sweep_value = prov.at("sweep_value").get<double>();
        gs.prov.seed = prov.at("seed").get<std::uint64_t>();
        gs.prov.replication = prov.at("replication").get<int>();
        gs.prov.objective = prov.at("objective").get<double>();
        const std::string status = prov.at("status").get<std::string>();
        gs.prov.status = status == "optimal"     ? SolveStatus::optimal
                         : status == "gap_limit" ? SolveStatus::gap_limit
                         : status == "time_limit" ? SolveStatus::time_limit
                                                  : SolveStatus::infeasible;
        out.push_back(std::move(gs));
    }
    return out;
}

// ---- results ---------------------------------------------------------------------

void write_results_csv(const std::vector<ParetoPoint>& points, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out << "# units: cost=USD/period,risk_cvar=MWh,risk_lolp=probability\n";
    out << "solution_id,model_family,sweep_param,seed,cost,risk_cvar,risk_lolp,dominated,"
           "solver_status\n";
    out.precision(10);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        out << i << ',' << to_string(p.prov.family) << ',' << p.prov.sweep_value << ','
            << p.prov.seed << ',' << p.cost << ',' << p.risk_cvar << ',' << p.risk_lolp
            << ',' << (p.dominated ? 1 : 0) << ',' << to_string(p.prov.status) << '\n';
    }
}

// ---- prop1 -----------------------------------------------------------------------

void write_prop1_report(const Prop1Report& report, const std::string& path) {
    json doc;
    doc["schema_version"] = 1;
    doc["epsilon"] = report.epsilon;
    doc["L"] = report.L;
    doc["applicable"] = report.applicable;
    doc["r2"] = report.r2;
    doc["pareto_true"] = report.pareto_true;
    doc["pareto_approx"] = report.pareto_approx;
    doc["violations_a"] = report.violations_a;
    doc["violations_b"] = report.violations_b;
    json scatter = json::array();
    for (const auto& row : report.scatter) {
        scatter.push_back({{"g", row[0]}, {"g_hat", row[1]}, {"fitted", row[2]}});
    }
    doc["scatter"] = std::move(scatter);
    save_json(doc, path);
}

// ---- manifest ----------------------------------------------------------------------

void write_manifest(const Manifest& manifest, const std::string& path) {
    json doc;
    doc["schema_version"] = 1;
    doc["command"] = manifest.command;
    doc["seed"] = manifest.seed;
    doc["config_hash"] = manifest.config_hash;
    doc["version"] = manifest.version;
    for (const auto& [k, v] : manifest.numbers) doc[k] = v;
    for (const auto& [k, v] : manifest.strings) doc[k] = v;
    save_json(doc, path);
}

}  // namespace gridrisk::io
