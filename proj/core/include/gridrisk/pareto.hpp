#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gridrisk/dispatch.hpp"
#include "gridrisk/mip.hpp"
#include "gridrisk/risk.hpp"
#include "gridrisk/rng.hpp"
#include "gridrisk/scenario.hpp"

namespace gridrisk {

// Everything needed to draw scenarios: the fleet, the demand regression, and
// the fitted temperature distribution (marginals per modeled hour of day plus
// the copula).
struct SystemModel {
    Fleet fleet;
    DemandModel demand;
    std::map<int, std::vector<BatsParams>> marginals_by_hour;
    CopulaModel copula;
    ScenarioGenOptions scenario_options;
    ExtremeOptions extreme_options;
    bool tail_override_enabled = false;  // default: cold tail in winter months, hot in summer
    Tail tail_override = Tail::cold;

    const std::vector<BatsParams>& marginals_for_hour(int hour_of_day) const;
};

// A scenario sample tagged with the seed space it was drawn from; generation
// and evaluation use distinct spaces so their streams stay disjoint.
struct ScenarioSet {
    std::vector<Scenario> scenarios;
    std::uint64_t seed = 0;
    SeedSpace space = SeedSpace::generation;
    HourMode mode = HourMode::normal;
};

// Draws hours (stratified), attaches temperature fields, availability, and
// demand. Extreme sets pin each scenario's day to the representative mid-month
// day so conditional thresholds are shared and cached.
ScenarioSet make_scenario_set(const SystemModel& system, HourMode mode, int n,
                              SeedSpace space, std::uint64_t seed,
                              SpatialQuantileCache* cache = nullptr, int jobs = 1);

struct GenerationPlan {
    int replications = 5;
    int n1 = 64;            // cost-objective sample size (base uses n1 + n2)
    int n2 = 64;            // risk-objective sample size
    bool conditional = false;  // draw the risk sample from the extreme distribution
    double alpha = 0.1;        // cvar threshold inside the optimization
    double lambda = 0.0;       // shed price; base family sweeps it instead
};

struct Provenance {
    ModelFamily family = ModelFamily::base;
    double sweep_value = 0.0;  // lambda for base, risk bound U otherwise
    std::uint64_t seed = 0;
    int replication = 0;
    SolveStatus status = SolveStatus::infeasible;
    double objective = 0.0;    // generation-phase objective value
};

struct GeneratedSolution {
    FleetDecision decision;
    Provenance prov;
};

struct GenerationResult {
    std::vector<GeneratedSolution> solutions;
    std::vector<std::string> failures;  // human-readable log of failed cells
};

// Phase one: replications x sweep solve attempts. Individual solver failures
// are recorded, not fatal; duplicate decisions keep their own provenance.
GenerationResult generate_solutions(ModelFamily family, const SystemModel& system,
                                    const GenerationPlan& plan,
                                    const std::vector<double>& sweep, std::uint64_t seed,
                                    const MipOptions& mip_options,
                                    SpatialQuantileCache* cache = nullptr, int jobs = 1);

enum class RiskMeasureKind { cvar, lolp };

struct RiskSpec {
    RiskMeasureKind kind = RiskMeasureKind::cvar;
    double alpha = 1e-4;  // tail-mean threshold for the cvar estimator
};

struct ParetoPoint {
    FleetDecision solution;
    double cost = 0.0;       // capital + mean dispatch cost on the cost sample
    double risk = 0.0;       // per the risk spec
    double risk_cvar = 0.0;  // tail-mean estimate
    double risk_lolp = 0.0;
    Provenance prov;
    bool dominated = false;
};

// Phase two: unbiased estimates on evaluation samples. Both sets must carry
// the evaluation seed space; anything else is rejected.
std::vector<ParetoPoint> evaluate_solutions(const std::vector<GeneratedSolution>& solutions,
                                            const SystemModel& system,
                                            const ScenarioSet& cost_set,
                                            const ScenarioSet& risk_set, double lambda,
                                            const RiskSpec& risk_spec, int jobs = 1);

// Sets the dominated flag under the (cost, risk) componentwise order.
void mark_dominated(std::vector<ParetoPoint>& points);

// Maximal antichain of the (cost, risk) order; ties are kept.
std::vector<ParetoPoint> nondominated_filter(const std::vector<ParetoPoint>& points);

// Rows sorted by risk with dominated and above-cutoff flags; identical fleet
// decisions are collapsed to one row. Also writes a small JSON series file
// for plotting.
void tradeoff_export(const std::vector<ParetoPoint>& points, double cutoff_risk,
                     const std::string& csv_path, const std::string& plot_path);

}  // namespace gridrisk
