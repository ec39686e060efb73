#include "gridrisk/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "gridrisk/errors.hpp"

namespace gridrisk {

using nlohmann::json;

namespace {

json canonical_json(const RunConfig& c) {
    json doc;
    doc["paths"] = {{"fleet", c.paths.fleet},
                    {"demand_model", c.paths.demand_model},
                    {"marginals", c.paths.marginals},
                    {"copula", c.paths.copula},
                    {"coords", c.paths.coords},
                    {"history", c.paths.history},
                    {"output_dir", c.paths.output_dir}};
    doc["experiment"] = {{"model_family", c.experiment.model_family},
                         {"replications", c.experiment.replications},
                         {"n1", c.experiment.n1},
                         {"n2", c.experiment.n2},
                         {"alpha", c.experiment.alpha},
                         {"lambda", c.experiment.lambda},
                         {"sweep", c.experiment.sweep},
                         {"conditional", c.experiment.conditional},
                         {"tail", c.experiment.tail},
                         {"q_spatial", c.experiment.q_spatial},
                         {"z_threshold_alpha", c.experiment.z_threshold_alpha},
                         {"threshold_samples", c.experiment.threshold_samples},
                         {"seasonal_fit", c.experiment.seasonal_fit},
                         {"wind_interp", c.experiment.wind_interp},
                         {"wind_k", c.experiment.wind_k},
                         {"hours_of_day", c.experiment.hours_of_day}};
    doc["solver"] = {{"gap_tol", c.solver.gap_tol},
                     {"time_limit_s", c.solver.time_limit_s},
                     {"node_limit", c.solver.node_limit}};
    doc["evaluation"] = {{"n_cost", c.evaluation.n_cost},
                         {"n_risk", c.evaluation.n_risk},
                         {"n_risk_conditional", c.evaluation.n_risk_conditional},
                         {"risk_measure", c.evaluation.risk_measure},
                         {"cvar_alpha", c.evaluation.cvar_alpha},
                         {"cutoff_risk", c.evaluation.cutoff_risk}};
    doc["jobs"] = c.jobs;
    return doc;
}

}  // namespace

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ConfigError("malformed config " + path + ": " + e.what());
    }

    RunConfig c;
    if (doc.contains("paths")) {
        const auto& p = doc["paths"];
        c.paths.fleet = p.value("fleet", "");
        c.paths.demand_model = p.value("demand_model", "");
        c.paths.marginals = p.value("marginals", "");
        c.paths.copula = p.value("copula", "");
        c.paths.coords = p.value("coords", "");
        c.paths.history = p.value("history", "");
        c.paths.output_dir = p.value("output_dir", c.paths.output_dir);
    }
    if (doc.contains("experiment")) {
        const auto& e = doc["experiment"];
        c.experiment.model_family = e.value("model_family", c.experiment.model_family);
        c.experiment.replications = e.value("replications", c.experiment.replications);
        c.experiment.n1 = e.value("n1", c.experiment.n1);
        c.experiment.n2 = e.value("n2", c.experiment.n2);
        c.experiment.alpha = e.value("alpha", c.experiment.alpha);
        c.experiment.lambda = e.value("lambda", c.experiment.lambda);
        if (e.contains("sweep")) {
            c.experiment.sweep = e["sweep"].get<std::vector<double>>();
        }
        c.experiment.conditional = e.value("conditional", c.experiment.conditional);
        c.experiment.tail = e.value("tail", c.experiment.tail);
        c.experiment.q_spatial = e.value("q_spatial", c.experiment.q_spatial);
        c.experiment.z_threshold_alpha =
            e.value("z_threshold_alpha", c.experiment.z_threshold_alpha);
        c.experiment.threshold_samples =
            e.value("threshold_samples", c.experiment.threshold_samples);
        c.experiment.seasonal_fit = e.value("seasonal_fit", c.experiment.seasonal_fit);
        c.experiment.wind_interp = e.value("wind_interp", c.experiment.wind_interp);
        c.experiment.wind_k = e.value("wind_k", c.experiment.wind_k);
        if (e.contains("hours_of_day")) {
            c.experiment.hours_of_day = e["hours_of_day"].get<std::vector<int>>();
        }
    }
    if (doc.contains("solver")) {
        const auto& s = doc["solver"];
        c.solver.gap_tol = s.value("gap_tol", c.solver.gap_tol);
        c.solver.time_limit_s = s.value("time_limit_s", c.solver.time_limit_s);
        c.solver.node_limit = s.value("node_limit", c.solver.node_limit);
    }
    if (doc.contains("evaluation")) {
        const auto& e = doc["evaluation"];
        c.evaluation.n_cost = e.value("n_cost", c.evaluation.n_cost);
        c.evaluation.n_risk = e.value("n_risk", c.evaluation.n_risk);
        c.evaluation.n_risk_conditional =
            e.value("n_risk_conditional", c.evaluation.n_risk_conditional);
        c.evaluation.risk_measure = e.value("risk_measure", c.evaluation.risk_measure);
        c.evaluation.cvar_alpha = e.value("cvar_alpha", c.evaluation.cvar_alpha);
        c.evaluation.cutoff_risk = e.value("cutoff_risk", c.evaluation.cutoff_risk);
    }
    c.jobs = doc.value("jobs", c.jobs);

    if (const char* out_dir = std::getenv("GRIDRISK_OUTPUT_DIR")) {
        c.paths.output_dir = out_dir;
    }
    return c;
}

void RunConfig::validate(bool needs_fleet, bool needs_demand, bool needs_marginals,
                         bool needs_copula, bool needs_history) const {
    const auto require = [](const std::string& path, const char* what) {
        if (path.empty()) {
            throw ConfigError(std::string("config: missing path for ") + what);
        }
        if (!std::filesystem::exists(path)) {
            throw ConfigError(std::string("config: ") + what + " file not found: " + path);
        }
    };
    if (needs_fleet) require(paths.fleet, "fleet");
    if (needs_demand) require(paths.demand_model, "demand_model");
    if (needs_marginals) require(paths.marginals, "marginals");
    if (needs_copula) require(paths.copula, "copula");
    if (needs_history) require(paths.history, "history");
    if (experiment.replications < 1 || experiment.n1 < 1 || experiment.n2 < 1 ||
        evaluation.n_cost < 1 || evaluation.n_risk < 1) {
        throw ConfigError("config: sample sizes and replications must be positive");
    }
    if (experiment.tail != "auto" && experiment.tail != "hot" && experiment.tail != "cold") {
        throw ConfigError("config: tail must be auto, hot, or cold");
    }
    if (evaluation.risk_measure != "cvar" && evaluation.risk_measure != "lolp") {
        throw ConfigError("config: risk_measure must be cvar or lolp");
    }
    if (experiment.wind_interp != "verbatim" && experiment.wind_interp != "linear") {
        throw ConfigError("config: wind_interp must be verbatim or linear");
    }
}

std::string RunConfig::hash() const {
    const std::string text = canonical_json(*this).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace gridrisk
