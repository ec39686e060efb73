#include "gridrisk/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gridrisk/calendar.hpp"
#include "gridrisk/ef.hpp"
#include "gridrisk/errors.hpp"
#include "gridrisk/parallel.hpp"

namespace gridrisk {

const std::vector<BatsParams>& SystemModel::marginals_for_hour(int hour_of_day) const {
    const auto it = marginals_by_hour.find(hour_of_day);
    if (it == marginals_by_hour.end()) {
        throw ConfigError("SystemModel: no marginal parameters for hour of day " +
                          std::to_string(hour_of_day));
    }
    return it->second;
}

namespace {

// mid-month anchor days used for conditionally extreme sampling
int representative_day(int month) {
    static const int kMidMonthDay[12] = {15, 46, 74, 105, 135, 166,
                                         196, 227, 258, 288, 319, 349};
    return kMidMonthDay[month - 1];
}

Tail tail_for_month(const SystemModel& system, int month) {
    if (system.tail_override_enabled) return system.tail_override;
    return (month >= 4 && month <= 9) ? Tail::hot : Tail::cold;
}

}  // namespace

ScenarioSet make_scenario_set(const SystemModel& system, HourMode mode, int n,
                              SeedSpace space, std::uint64_t seed,
                              SpatialQuantileCache* cache, int jobs) {
    ScenarioSet set;
    set.seed = seed;
    set.space = space;
    set.mode = mode;

    const std::vector<int> hours = sample_hours(mode, n, substream(seed, space, 1));
    std::vector<TemperatureField> fields(hours.size());
    parallel_for(hours.size(), jobs, [&](std::size_t k) {
        const int h = hour_of_day(hours[k]);
        int day = day_of_hour(hours[k]);
        if (mode == HourMode::extreme) day = representative_day(month_of_day(day));
        const auto& marginals = system.marginals_for_hour(h);
        if (mode == HourMode::normal) {
            fields[k] = sample_unconditional(system.copula, marginals, h, day, 1,
                                             substream(seed, space, 2, k))[0];
        } else {
            const Tail tail = tail_for_month(system, month_of_day(day));
            fields[k] = sample_conditional_extreme(system.copula, marginals, h, day, 1,
                                                   tail, system.extreme_options,
                                                   substream(seed, space, 2, k), cache)[0];
        }
    });
    set.scenarios = build_scenarios(system.fleet, system.demand, fields,
                                    substream(seed, space, 3), system.scenario_options);
    return set;
}

GenerationResult generate_solutions(ModelFamily family, const SystemModel& system,
                                    const GenerationPlan& plan,
                                    const std::vector<double>& sweep, std::uint64_t seed,
                                    const MipOptions& mip_options,
                                    SpatialQuantileCache* cache, int jobs) {
    if (plan.replications < 1) throw ArgumentError("generate_solutions: replications >= 1");
    if (sweep.empty()) throw ArgumentError("generate_solutions: empty sweep");

    // one sample pair per replication, shared across the sweep
    std::vector<ScenarioSet> cost_sets(plan.replications);
    std::vector<ScenarioSet> risk_sets(plan.replications);
    for (int r = 0; r < plan.replications; ++r) {
        const std::uint64_t rep_seed = substream(seed, SeedSpace::generation, r);
        if (family == ModelFamily::base) {
            cost_sets[r] = make_scenario_set(system, HourMode::normal, plan.n1 + plan.n2,
                                             SeedSpace::generation, rep_seed, cache, jobs);
        } else {
            cost_sets[r] = make_scenario_set(system, HourMode::normal, plan.n1,
                                             SeedSpace::generation, rep_seed, cache, jobs);
            risk_sets[r] = make_scenario_set(
                system, plan.conditional ? HourMode::extreme : HourMode::normal, plan.n2,
                SeedSpace::generation, substream(rep_seed, SeedSpace::generation, 7),
                cache, jobs);
        }
    }

    const std::size_t cells = static_cast<std::size_t>(plan.replications) * sweep.size();
    std::vector<GeneratedSolution> solutions(cells);
    std::vector<char> ok(cells, 0);
    std::vector<std::string> failures(cells);

    parallel_for(cells, jobs, [&](std::size_t cell) {
        const int r = static_cast<int>(cell) / static_cast<int>(sweep.size());
        const double value = sweep[cell % sweep.size()];
        try {
            ExtensiveFormInstance instance;
            switch (family) {
                case ModelFamily::base:
                    instance = build_base(system.fleet, cost_sets[r].scenarios, value);
                    break;
                case ModelFamily::biobj_cvar:
                    instance = build_biobj_cvar(system.fleet, cost_sets[r].scenarios,
                                                risk_sets[r].scenarios, plan.lambda,
                                                plan.alpha, value);
                    break;
                case ModelFamily::biobj_lolp:
                    instance = build_biobj_lolp(system.fleet, cost_sets[r].scenarios,
                                                risk_sets[r].scenarios, plan.lambda, value);
                    break;
            }
            const SolveResult sol = solve(instance, mip_options);
            if (sol.status == SolveStatus::infeasible) {
                std::ostringstream msg;
                msg << to_string(family) << " rep " << r << " sweep " << value
                    << ": infeasible";
                failures[cell] = msg.str();
                return;
            }
            GeneratedSolution gs;
            gs.decision = sol.first_stage;
            gs.prov.family = family;
            gs.prov.sweep_value = value;
            gs.prov.seed = cost_sets[r].seed;
            gs.prov.replication = r;
            gs.prov.status = sol.status;
            gs.prov.objective = sol.objective;
            solutions[cell] = std::move(gs);
            ok[cell] = 1;
        } catch (const Error& e) {
            std::ostringstream msg;
            msg << to_string(family) << " rep " << r << " sweep " << value << ": "
                << e.what();
            failures[cell] = msg.str();
        }
    });

    GenerationResult result;
    for (std::size_t cell = 0; cell < cells; ++cell) {
        if (ok[cell]) {
            result.solutions.push_back(std::move(solutions[cell]));
        } else if (!failures[cell].empty()) {
            result.failures.push_back(std::move(failures[cell]));
        }
    }
    return result;
}

std::vector<ParetoPoint> evaluate_solutions(const std::vector<GeneratedSolution>& solutions,
                                            const SystemModel& system,
                                            const ScenarioSet& cost_set,
                                            const ScenarioSet& risk_set, double lambda,
                                            const RiskSpec& risk_spec, int jobs) {
    if (cost_set.space != SeedSpace::evaluation || risk_set.space != SeedSpace::evaluation) {
        throw ArgumentError(
            "evaluate_solutions: evaluation scenario sets must come from the "
            "evaluation seed space");
    }
    std::vector<ParetoPoint> points(solutions.size());
    parallel_for(solutions.size(), jobs, [&](std::size_t i) {
        const FleetDecision& x = solutions[i].decision;
        ParetoPoint p;
        p.solution = x;
        p.prov = solutions[i].prov;
        p.cost = base_objective(system.fleet, cost_set.scenarios, lambda, x);

        std::vector<double> shed(risk_set.scenarios.size());
        for (std::size_t k = 0; k < risk_set.scenarios.size(); ++k) {
            shed[k] = q_extreme(x, risk_set.scenarios[k], system.fleet);
        }
        const LossSample sample = LossSample::uniform(std::move(shed));
        p.risk_cvar = cvar_tail_mean(sample, risk_spec.alpha);
        p.risk_lolp = lolp(sample);
        p.risk = risk_spec.kind == RiskMeasureKind::cvar ? p.risk_cvar : p.risk_lolp;
        points[i] = std::move(p);
    });
    return points;
}

void mark_dominated(std::vector<ParetoPoint>& points) {
    for (auto& p : points) p.dominated = false;
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = 0; j < points.size(); ++j) {
            if (i == j) continue;
            const bool leq = points[j].cost <= points[i].cost &&
                             points[j].risk <= points[i].risk;
            const bool strict = points[j].cost < points[i].cost ||
                                points[j].risk < points[i].risk;
            if (leq && strict) {
                points[i].dominated = true;
                break;
            }
        }
    }
}

std::vector<ParetoPoint> nondominated_filter(const std::vector<ParetoPoint>& points) {
    std::vector<ParetoPoint> marked = points;
    mark_dominated(marked);
    std::vector<ParetoPoint> kept;
    for (auto& p : marked) {
        if (!p.dominated) kept.push_back(std::move(p));
    }
    return kept;
}

namespace {

std::string decision_key(const FleetDecision& x) {
    std::ostringstream key;
    for (int b : x.build) key << b;
    key << '|';
    for (double c : x.capacity) key << c << ',';
    return key.str();
}

}  // namespace

void tradeoff_export(const std::vector<ParetoPoint>& points, double cutoff_risk,
                     const std::string& csv_path, const std::string& plot_path) {
    std::vector<ParetoPoint> rows = points;
    mark_dominated(rows);
    std::sort(rows.begin(), rows.end(), [](const ParetoPoint& a, const ParetoPoint& b) {
        if (a.risk != b.risk) return a.risk < b.risk;
        return a.cost < b.cost;
    });
    // identical decisions collapse to one exported row
    std::vector<ParetoPoint> unique_rows;
    {
        std::vector<std::string> seen;
        for (auto& p : rows) {
            const std::string key = decision_key(p.solution);
            if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
            seen.push_back(key);
            unique_rows.push_back(std::move(p));
        }
    }

    std::ofstream csv(csv_path);
    if (!csv) throw ConfigError("tradeoff_export: cannot write " + csv_path);
    csv << "# units: cost=USD/period,risk=MWh or probability\n";
    csv << "solution_id,model_family,sweep_param,seed,cost,risk,dominated,above_cutoff\n";
    csv.precision(10);
    for (std::size_t i = 0; i < unique_rows.size(); ++i) {
        const auto& p = unique_rows[i];
        csv << i << ',' << to_string(p.prov.family) << ',' << p.prov.sweep_value << ','
            << p.prov.seed << ',' << p.cost << ',' << p.risk << ','
            << (p.dominated ? 1 : 0) << ',' << (p.risk > cutoff_risk ? 1 : 0) << '\n';
    }
    csv.close();

    std::ofstream plot(plot_path);
    if (!plot) throw ConfigError("tradeoff_export: cannot write " + plot_path);
    plot.precision(10);
    plot << "{\n  \"cutoff_risk\": " << cutoff_risk << ",\n  \"series\": [\n";
    const auto emit = [&](const char* name, bool dominated, bool last) {
        plot << "    {\"name\": \"" << name << "\", \"risk\": [";
        bool first = true;
        for (const auto& p : unique_rows) {
            if (p.dominated != dominated) continue;
            if (!first) plot << ", ";
            plot << p.risk;
            first = false;
        }
        plot << "], \"cost\": [";
        first = true;
        for (const auto& p : unique_rows) {
            if (p.dominated != dominated) continue;
            if (!first) plot << ", ";
            plot << p.cost;
            first = false;
        }
        plot << "]}" << (last ? "\n" : ",\n");
    };
    emit("nondominated", false, false);
    emit("dominated", true, true);
    plot << "  ]\n}\n";
}

}  // namespace gridrisk
