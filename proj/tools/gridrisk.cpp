// Batch front-end: wires the configuration file to the library modules and
// emits scenario files, solver results, trade-off exports, and diagnostics.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "gridrisk/calendar.hpp"
#include "gridrisk/config.hpp"
#include "gridrisk/ef.hpp"
#include "gridrisk/errors.hpp"
#include "gridrisk/io.hpp"
#include "gridrisk/math.hpp"
#include "gridrisk/parallel.hpp"
#include "gridrisk/pareto.hpp"
#include "gridrisk/prop1.hpp"

namespace fs = std::filesystem;
using namespace gridrisk;

namespace {

#ifndef GRIDRISK_VERSION
#define GRIDRISK_VERSION "0.0.0"
#endif

struct CommonArgs {
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int jobs = 0;
    std::string output_dir;  // flag-level override, beats file and environment
};

RunConfig load_config(const CommonArgs& args) {
    RunConfig config = RunConfig::load(args.config_path);
    if (!args.output_dir.empty()) config.paths.output_dir = args.output_dir;
    if (args.jobs > 0) config.jobs = args.jobs;
    return config;
}

int effective_jobs(const RunConfig& config) {
    return config.jobs > 0 ? config.jobs : default_jobs();
}

std::string out_path(const RunConfig& config, const std::string& name) {
    fs::create_directories(config.paths.output_dir);
    return (fs::path(config.paths.output_dir) / name).string();
}

ExtremeOptions extreme_options_from(const RunConfig& config) {
    ExtremeOptions opts;
    opts.q_spatial = config.experiment.q_spatial;
    opts.z_threshold_alpha = config.experiment.z_threshold_alpha;
    opts.threshold_sample_count = config.experiment.threshold_samples;
    return opts;
}

SystemModel load_system(const RunConfig& config) {
    config.validate(true, true, true, true, false);
    SystemModel system;
    system.fleet = io::read_fleet(config.paths.fleet);
    system.demand = io::read_demand_model(config.paths.demand_model);
    system.marginals_by_hour = io::read_marginals(config.paths.marginals);
    system.copula = io::read_copula(config.paths.copula);
    system.scenario_options.wind_k = config.experiment.wind_k;
    system.scenario_options.wind_interp = config.experiment.wind_interp == "linear"
                                              ? WindInterp::linear
                                              : WindInterp::verbatim;
    system.extreme_options = extreme_options_from(config);
    if (config.experiment.tail != "auto") {
        system.tail_override_enabled = true;
        system.tail_override =
            config.experiment.tail == "hot" ? Tail::hot : Tail::cold;
    }
    return system;
}

MipOptions mip_options_from(const RunConfig& config) {
    MipOptions opts;
    opts.gap_tol = config.solver.gap_tol;
    opts.time_limit_s = config.solver.time_limit_s;
    opts.node_limit = config.solver.node_limit;
    return opts;
}

io::Manifest base_manifest(const std::string& command, const RunConfig& config,
                           const CommonArgs& args) {
    io::Manifest m;
    m.command = command;
    m.seed = args.seed;
    m.config_hash = config.hash();
    m.version = GRIDRISK_VERSION;
    return m;
}

void record_thresholds(io::Manifest& manifest, const SpatialQuantileCache& cache) {
    for (const auto& entry : cache.snapshot()) {
        std::string key = "threshold_h" + std::to_string(entry.hour) + "_d" +
                          std::to_string(entry.day) +
                          (entry.tail == Tail::hot ? "_hot" : "_cold");
        manifest.numbers[key] = entry.threshold;
    }
}

// ---- subcommand bodies -----------------------------------------------------

int cmd_fit_marginals(const CommonArgs& args) {
    const RunConfig config = load_config(args);
    config.validate(false, false, false, false, true);
    const auto fields = io::read_temperature_csv(config.paths.history);
    if (fields.empty()) throw ConfigError("fit-marginals: empty history file");
    const int sites = static_cast<int>(fields.front().values.size());

    io::MarginalsByHour fitted;
    std::vector<std::string> failures;
    for (int hour : config.experiment.hours_of_day) {
        std::vector<std::vector<BatsObservation>> obs(sites);
        for (const auto& f : fields) {
            if (f.hour_of_day != hour) continue;
            for (int l = 0; l < sites; ++l) {
                obs[l].push_back({static_cast<double>(f.day_of_year), f.values[l]});
            }
        }
        if (obs[0].empty()) continue;  // hour not present in the history
        std::vector<BatsParams> params(sites);
        std::vector<char> ok(sites, 0);
        parallel_for(sites, effective_jobs(config), [&](std::size_t l) {
            BatsFitOptions opts;
            opts.seasonal = config.experiment.seasonal_fit;
            const BatsFitResult fit = fit_bats_ml(obs[l], opts);
            params[l] = fit.params;
            ok[l] = 1;
        });
        for (int l = 0; l < sites; ++l) {
            if (!ok[l]) {
                failures.push_back("hour " + std::to_string(hour) + " site " +
                                   std::to_string(l));
            }
        }
        fitted[hour] = std::move(params);
    }
    if (fitted.empty()) throw ConfigError("fit-marginals: no configured hour found in history");

    const std::string path = config.paths.marginals.empty()
                                 ? out_path(config, "marginals.json")
                                 : config.paths.marginals;
    io::write_marginals(fitted, path);
    io::Manifest manifest = base_manifest("fit-marginals", config, args);
    manifest.numbers["sites"] = sites;
    manifest.numbers["hours"] = static_cast<double>(fitted.size());
    manifest.strings["marginals"] = path;
    io::write_manifest(manifest, out_path(config, "manifest_fit_marginals.json"));
    for (const auto& f : failures) std::cerr << "fit failed: " << f << '\n';
    return failures.empty() ? 0 : 1;
}

int cmd_fit_copula(const CommonArgs& args) {
    const RunConfig config = load_config(args);
    config.validate(false, false, true, false, true);
    if (config.paths.coords.empty() || !fs::exists(config.paths.coords)) {
        throw ConfigError("fit-copula: config needs paths.coords");
    }
    const auto coords = io::read_site_coords(config.paths.coords);
    const auto marginals = io::read_marginals(config.paths.marginals);
    const auto fields = io::read_temperature_csv(config.paths.history);

    std::array<std::vector<Eigen::VectorXd>, 12> by_month;
    for (const auto& f : fields) {
        const auto it = marginals.find(f.hour_of_day);
        if (it == marginals.end()) continue;
        const auto& params = it->second;
        if (params.size() != f.values.size()) {
            throw ConfigError("fit-copula: history site count does not match marginals");
        }
        Eigen::VectorXd z(f.values.size());
        for (std::size_t l = 0; l < f.values.size(); ++l) {
            z(l) = math::normal_quantile(
                bats_cdf(f.values[l], params[l], f.day_of_year));
        }
        by_month[month_of_day(f.day_of_year) - 1].push_back(std::move(z));
    }

    const CopulaFitResult fit = fit_copula_lengthscale(by_month, coords);
    if (fit.single_site) {
        std::cerr << "fit-copula: single site, correlation is vacuous; "
                     "using the default length scale\n";
    }
    const std::string path = config.paths.copula.empty() ? out_path(config, "copula.json")
                                                         : config.paths.copula;
    io::write_copula(fit.model, path);
    io::Manifest manifest = base_manifest("fit-copula", config, args);
    for (int m = 0; m < 12; ++m) {
        manifest.numbers["gamma_m" + std::to_string(m + 1)] = fit.model.gamma_by_month[m];
    }
    manifest.strings["copula"] = path;
    io::write_manifest(manifest, out_path(config, "manifest_fit_copula.json"));
    return 0;
}

int cmd_sample(const CommonArgs& args) {
    const RunConfig config = load_config(args);
    const SystemModel system = load_system(config);
    const int jobs = effective_jobs(config);
    SpatialQuantileCache cache;

    const ScenarioSet normal =
        make_scenario_set(system, HourMode::normal, config.experiment.n1,
                          SeedSpace::generation, args.seed, &cache, jobs);
    io::write_scenarios_csv(normal.scenarios, system.fleet,
                            out_path(config, "scenarios_normal.csv"),
                            out_path(config, "temps_normal.csv"));

    io::Manifest manifest = base_manifest("sample", config, args);
    manifest.numbers["n_normal"] = config.experiment.n1;
    if (config.experiment.conditional) {
        const ScenarioSet extreme =
            make_scenario_set(system, HourMode::extreme, config.experiment.n2,
                              SeedSpace::generation, substream(args.seed, 0x5eedULL),
                              &cache, jobs);
        io::write_scenarios_csv(extreme.scenarios, system.fleet,
                                out_path(config, "scenarios_extreme.csv"),
                                out_path(config, "temps_extreme.csv"));
        manifest.numbers["n_extreme"] = config.experiment.n2;
    }
    record_thresholds(manifest, cache);
    io::write_manifest(manifest, out_path(config, "manifest_sample.json"));
    return 0;
}

int cmd_solve(const CommonArgs& args) {
    const RunConfig config = load_config(args);
    const SystemModel system = load_system(config);
    if (config.experiment.sweep.empty()) throw ConfigError("solve: empty sweep list");
    const ModelFamily family = model_family_from_string(config.experiment.model_family);

    GenerationPlan plan;
    plan.replications = config.experiment.replications;
    plan.n1 = config.experiment.n1;
    plan.n2 = config.experiment.n2;
    plan.conditional = config.experiment.conditional;
    plan.alpha = config.experiment.alpha;
    plan.lambda = config.experiment.lambda;

    SpatialQuantileCache cache;
    const GenerationResult result =
        generate_solutions(family, system, plan, config.experiment.sweep, args.seed,
                           mip_options_from(config), &cache, effective_jobs(config));
    io::write_solutions(result.solutions, system.fleet, out_path(config, "solutions.json"));

    io::Manifest manifest = base_manifest("solve", config, args);
    manifest.numbers["solutions"] = static_cast<double>(result.solutions.size());
    manifest.numbers["failures"] = static_cast<double>(result.failures.size());
    manifest.strings["model_family"] = config.experiment.model_family;
    record_thresholds(manifest, cache);
    io::write_manifest(manifest, out_path(config, "manifest_solve.json"));

    for (const auto& f : result.failures) std::cerr << "cell failed: " << f << '\n';
    return result.failures.empty() ? 0 : 1;
}

RiskSpec risk_spec_from(const RunConfig& config) {
    RiskSpec spec;
    spec.kind = config.evaluation.risk_measure == "lolp" ? RiskMeasureKind::lolp
                                                         : RiskMeasureKind::cvar;
    spec.alpha = config.evaluation.cvar_alpha;
    return spec;
}

int cmd_evaluate(const CommonArgs& args) {
    const RunConfig config = load_config(args);
    const SystemModel system = load_system(config);
    const std::string solutions_path = out_path(config, "solutions.json");
    if (!fs::exists(solutions_path)) {
        throw ConfigError("evaluate: missing " + solutions_path + "; run solve first");
    }
    const auto solutions = io::read_solutions(system.fleet, solutions_path);
    const int jobs = effective_jobs(config);

    const ScenarioSet cost_set =
        make_scenario_set(system, HourMode::normal, config.evaluation.n_cost,
                          SeedSpace::evaluation, args.seed, nullptr, jobs);
    const ScenarioSet risk_set = make_scenario_set(
        system, HourMode::normal, config.evaluation.n_risk, SeedSpace::evaluation,
        substream(args.seed, 0xe7a1ULL), nullptr, jobs);

    std::vector<ParetoPoint> points =
        evaluate_solutions(solutions, system, cost_set, risk_set,
                           config.experiment.lambda, risk_spec_from(config), jobs);
    mark_dominated(points);
    io::write_results_csv(points, out_path(config, "results.csv"));

    io::Manifest manifest = base_manifest("evaluate", config, args);
    manifest.numbers["n_cost"] = config.evaluation.n_cost;
    manifest.numbers["n_risk"] = config.evaluation.n_risk;
    manifest.numbers["points"] = static_cast<double>(points.size());
    io::write_manifest(manifest, out_path(config, "manifest_evaluate.json"));
    return 0;
}

int cmd_pareto(const CommonArgs& args) {
    const RunConfig config = load_config(args);
    const SystemModel system = load_system(config);
    const std::string solutions_path = out_path(config, "solutions.json");
    const std::string results_path = out_path(config, "results.csv");
    if (!fs::exists(solutions_path) || !fs::exists(results_path)) {
        throw ConfigError("pareto: need solutions.json and results.csv; run solve and "
                          "evaluate first");
    }
    const auto solutions = io::read_solutions(system.fleet, solutions_path);

    // re-attach decisions to the evaluated rows by position
    std::vector<ParetoPoint> points;
    std::ifstream in(results_path);
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() < 9) throw ConfigError("pareto: short row in results.csv");
        ParetoPoint p;
        const std::size_t id = std::stoul(cells[0]);
        if (id >= solutions.size()) throw ConfigError("pareto: solution_id out of range");
        p.solution = solutions[id].decision;
        p.prov = solutions[id].prov;
        p.cost = std::stod(cells[4]);
        p.risk_cvar = std::stod(cells[5]);
        p.risk_lolp = std::stod(cells[6]);
        p.risk = config.evaluation.risk_measure == "lolp" ? p.risk_lolp : p.risk_cvar;
        points.push_back(std::move(p));
    }

    tradeoff_export(points, config.evaluation.cutoff_risk,
                    out_path(config, "tradeoff.csv"), out_path(config, "tradeoff_plot.json"));
    io::Manifest manifest = base_manifest("pareto", config, args);
    manifest.numbers["points"] = static_cast<double>(points.size());
    manifest.numbers["cutoff_risk"] = config.evaluation.cutoff_risk;
    io::write_manifest(manifest, out_path(config, "manifest_pareto.json"));
    return 0;
}

int cmd_check_prop1(const CommonArgs& args, const std::string& h_family) {
    const RunConfig config = load_config(args);
    const SystemModel system = load_system(config);
    const std::string solutions_path = out_path(config, "solutions.json");
    if (!fs::exists(solutions_path)) {
        throw ConfigError("check-prop1: missing " + solutions_path + "; run solve first");
    }
    const auto solutions = io::read_solutions(system.fleet, solutions_path);
    if (solutions.empty()) throw ConfigError("check-prop1: no solutions to diagnose");
    const int jobs = effective_jobs(config);
    SpatialQuantileCache cache;

    const ScenarioSet cost_set =
        make_scenario_set(system, HourMode::normal, config.evaluation.n_cost,
                          SeedSpace::evaluation, args.seed, nullptr, jobs);
    const ScenarioSet risk_set = make_scenario_set(
        system, HourMode::normal, config.evaluation.n_risk, SeedSpace::evaluation,
        substream(args.seed, 0xe7a1ULL), nullptr, jobs);
    const ScenarioSet cond_set = make_scenario_set(
        system, HourMode::extreme, config.evaluation.n_risk_conditional,
        SeedSpace::evaluation, substream(args.seed, 0xc0deULL), &cache, jobs);

    Prop1Input input;
    input.f.resize(solutions.size());
    input.g.resize(solutions.size());
    input.g_hat.resize(solutions.size());
    parallel_for(solutions.size(), jobs, [&](std::size_t i) {
        const FleetDecision& x = solutions[i].decision;
        input.f[i] = base_objective(system.fleet, cost_set.scenarios,
                                    config.experiment.lambda, x);
        std::vector<double> shed(risk_set.scenarios.size());
        for (std::size_t k = 0; k < shed.size(); ++k) {
            shed[k] = q_extreme(x, risk_set.scenarios[k], system.fleet);
        }
        input.g[i] = cvar_tail_mean(LossSample::uniform(std::move(shed)),
                                    config.evaluation.cvar_alpha);
        std::vector<double> cond_shed(cond_set.scenarios.size());
        for (std::size_t k = 0; k < cond_shed.size(); ++k) {
            cond_shed[k] = q_extreme(x, cond_set.scenarios[k], system.fleet);
        }
        input.g_hat[i] = cvar(LossSample::uniform(std::move(cond_shed)),
                              config.experiment.alpha);
    });

    const Prop1Report report = check_prop1(
        input, h_family == "affine" ? HFamily::affine : HFamily::isotonic);
    io::write_prop1_report(report, out_path(config, "prop1.json"));

    io::Manifest manifest = base_manifest("check-prop1", config, args);
    manifest.numbers["epsilon"] = report.epsilon;
    manifest.numbers["L"] = report.L;
    manifest.numbers["r2"] = report.r2;
    manifest.strings["h_family"] = h_family;
    io::write_manifest(manifest, out_path(config, "manifest_check_prop1.json"));
    std::cout << "prop1: epsilon=" << report.epsilon << " L=" << report.L
              << " r2=" << report.r2 << " applicable=" << (report.applicable ? "yes" : "no")
              << " violations=" << report.violations_a.size() + report.violations_b.size()
              << '\n';
    return 0;
}

int cmd_export_lp(const CommonArgs& args, int sweep_index) {
    const RunConfig config = load_config(args);
    const SystemModel system = load_system(config);
    if (config.experiment.sweep.empty()) throw ConfigError("export-lp: empty sweep list");
    if (sweep_index < 0 || sweep_index >= static_cast<int>(config.experiment.sweep.size())) {
        throw ConfigError("export-lp: sweep index out of range");
    }
    const double value = config.experiment.sweep[sweep_index];
    const ModelFamily family = model_family_from_string(config.experiment.model_family);
    const int jobs = effective_jobs(config);
    SpatialQuantileCache cache;

    const std::uint64_t rep_seed = substream(args.seed, SeedSpace::generation, 0);
    ExtensiveFormInstance instance;
    if (family == ModelFamily::base) {
        const ScenarioSet n1 = make_scenario_set(
            system, HourMode::normal, config.experiment.n1 + config.experiment.n2,
            SeedSpace::generation, rep_seed, &cache, jobs);
        instance = build_base(system.fleet, n1.scenarios, value);
    } else {
        const ScenarioSet n1 =
            make_scenario_set(system, HourMode::normal, config.experiment.n1,
                              SeedSpace::generation, rep_seed, &cache, jobs);
        const ScenarioSet n2 = make_scenario_set(
            system, config.experiment.conditional ? HourMode::extreme : HourMode::normal,
            config.experiment.n2, SeedSpace::generation,
            substream(rep_seed, SeedSpace::generation, 7), &cache, jobs);
        instance = family == ModelFamily::biobj_cvar
                       ? build_biobj_cvar(system.fleet, n1.scenarios, n2.scenarios,
                                          config.experiment.lambda,
                                          config.experiment.alpha, value)
                       : build_biobj_lolp(system.fleet, n1.scenarios, n2.scenarios,
                                          config.experiment.lambda, value);
    }

    const std::string path = out_path(config, "instance.mps");
    std::ofstream out(path);
    instance.write_mps(out);
    io::Manifest manifest = base_manifest("export-lp", config, args);
    manifest.numbers["variables"] = instance.variable_count();
    manifest.numbers["rows"] = instance.row_count();
    manifest.numbers["sweep_value"] = value;
    manifest.strings["mps"] = path;
    io::write_manifest(manifest, out_path(config, "manifest_export_lp.json"));
    std::cout << "wrote " << path << " (" << instance.variable_count() << " variables, "
              << instance.row_count() << " rows)\n";
    return 0;
}

void add_common(CLI::App* cmd, CommonArgs& args, bool seed_required) {
    cmd->add_option("--config", args.config_path, "configuration JSON")->required();
    auto* seed = cmd->add_option("--seed", args.seed, "random seed");
    if (seed_required) seed->required();
    cmd->add_option("--jobs", args.jobs, "worker thread cap (default: logical cores)");
    cmd->add_option("--output-dir", args.output_dir, "override the output directory");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bi-objective capacity planning under temperature risk"};
    app.set_version_flag("--version", GRIDRISK_VERSION);
    app.require_subcommand(1);

    CommonArgs args;
    std::string h_family = "isotonic";
    int sweep_index = 0;

    auto* fit_marginals = app.add_subcommand("fit-marginals", "fit per-site marginals");
    add_common(fit_marginals, args, false);
    auto* fit_copula = app.add_subcommand("fit-copula", "fit monthly spatial length scales");
    add_common(fit_copula, args, false);
    auto* sample = app.add_subcommand("sample", "emit scenario files");
    add_common(sample, args, true);
    auto* solve_cmd = app.add_subcommand("solve", "run the generation phase");
    add_common(solve_cmd, args, true);
    auto* evaluate = app.add_subcommand("evaluate", "estimate cost and risk of solutions");
    add_common(evaluate, args, true);
    auto* pareto = app.add_subcommand("pareto", "export the trade-off curve");
    add_common(pareto, args, false);
    auto* prop1 = app.add_subcommand("check-prop1", "monotone-approximation diagnostic");
    add_common(prop1, args, true);
    prop1->add_option("--h-family", h_family, "isotonic or affine");
    auto* export_lp = app.add_subcommand("export-lp", "write the instance as fixed MPS");
    add_common(export_lp, args, true);
    export_lp->add_option("--sweep-index", sweep_index, "which sweep value to export");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (fit_marginals->parsed()) return cmd_fit_marginals(args);
        if (fit_copula->parsed()) return cmd_fit_copula(args);
        if (sample->parsed()) return cmd_sample(args);
        if (solve_cmd->parsed()) return cmd_solve(args);
        if (evaluate->parsed()) return cmd_evaluate(args);
        if (pareto->parsed()) return cmd_pareto(args);
        if (prop1->parsed()) return cmd_check_prop1(args, h_family);
        if (export_lp->parsed()) return cmd_export_lp(args, sweep_index);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const ArgumentError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
