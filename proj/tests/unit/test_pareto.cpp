#include <doctest.h>

#include "gridrisk/errors.hpp"
#include "gridrisk/pareto.hpp"
#include "minisystem.hpp"
#include "testbed.hpp"

#include <filesystem>
#include <fstream>

using namespace gridrisk;

namespace {

ParetoPoint point(double cost, double risk) {
    ParetoPoint p;
    p.cost = cost;
    p.risk = risk;
    return p;
}

MipOptions fast_mip() {
    MipOptions opts;
    opts.gap_tol = 1e-6;
    return opts;
}

}  // namespace

TEST_CASE("nondominated filter basics") {
    {
        const auto kept = nondominated_filter({point(1, 2), point(2, 1)});
        CHECK(kept.size() == 2);  // incomparable pair
    }
    {
        const auto kept = nondominated_filter({point(1, 1), point(2, 2)});
        REQUIRE(kept.size() == 1);
        CHECK(kept[0].cost == 1.0);
    }
    {
        // exact ties are kept
        const auto kept = nondominated_filter({point(1, 1), point(1, 1), point(3, 0.5)});
        CHECK(kept.size() == 3);
    }
}

TEST_CASE("nondominated filter matches the quadratic oracle on random clouds") {
    Rng rng(313);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<ParetoPoint> cloud;
        const int n = 2 + static_cast<int>(rng.below(60));
        for (int i = 0; i < n; ++i) {
            cloud.push_back(point(std::round(rng.uniform(0.0, 20.0)),
                                  std::round(rng.uniform(0.0, 20.0))));
        }
        const auto kept = nondominated_filter(cloud);
        // oracle: brute-force dominance marking
        int expected = 0;
        for (const auto& p : cloud) {
            bool dominated = false;
            for (const auto& q : cloud) {
                if (&p == &q) continue;
                if (q.cost <= p.cost && q.risk <= p.risk &&
                    (q.cost < p.cost || q.risk < p.risk)) {
                    dominated = true;
                    break;
                }
            }
            if (!dominated) ++expected;
        }
        CHECK(static_cast<int>(kept.size()) == expected);
        // antichain: no kept point dominates another
        for (const auto& p : kept) {
            for (const auto& q : kept) {
                if (&p == &q) continue;
                CHECK(!(q.cost <= p.cost && q.risk <= p.risk &&
                        (q.cost < p.cost || q.risk < p.risk)));
            }
        }
    }
}

TEST_CASE("generation produces one attempt per replication and sweep value") {
    const SystemModel system = minisystem::make_tiny_system();
    GenerationPlan plan;
    plan.replications = 2;
    plan.n1 = 8;
    plan.n2 = 8;
    plan.conditional = false;
    plan.lambda = minisystem::max_op_cost(system.fleet) + 5.0;
    SpatialQuantileCache cache;
    const GenerationResult result =
        generate_solutions(ModelFamily::biobj_cvar, system, plan, {1e6, 500.0, 0.0}, 4242,
                           fast_mip(), &cache, 2);
    CHECK(result.solutions.size() + result.failures.size() == 6);
    CHECK(result.solutions.size() <= 6);
    for (const auto& s : result.solutions) {
        CHECK(s.prov.family == ModelFamily::biobj_cvar);
        CHECK(s.prov.replication < 2);
    }
}

TEST_CASE("conditional flag swaps the risk sample to the extreme distribution") {
    const SystemModel system = minisystem::make_tiny_system();
    SpatialQuantileCache cache;
    const ScenarioSet normal = make_scenario_set(system, HourMode::normal, 16,
                                                 SeedSpace::generation, 77, &cache, 2);
    const ScenarioSet extreme = make_scenario_set(system, HourMode::extreme, 16,
                                                  SeedSpace::generation, 77, &cache, 2);
    // extreme scenarios anchor on the four representative mid-month days
    for (const auto& s : extreme.scenarios) {
        const int day = s.temps.day_of_year;
        CHECK((day == 15 || day == 46 || day == 196 || day == 227));
    }
    // and their demand skews higher than the normal sample's
    double mean_normal = 0.0, mean_extreme = 0.0;
    for (const auto& s : normal.scenarios) mean_normal += s.demand;
    for (const auto& s : extreme.scenarios) mean_extreme += s.demand;
    CHECK(mean_extreme / 16.0 > mean_normal / 16.0);
}

TEST_CASE("two-generator sweep endpoints: unconstrained and fully built") {
    // one cheap fragile unit and one expensive reliable unit
    Fleet fleet;
    fleet.generators.push_back(minisystem::unit("a", DecisionKind::binary_build,
                                                Technology::gas_cc, 0, 100.0, 100.0, 10.0,
                                                minisystem::flat_outage(0.0)));
    fleet.generators.push_back(minisystem::unit("b", DecisionKind::binary_build,
                                                Technology::gas_ct, 0, 100.0, 400.0, 20.0,
                                                minisystem::flat_outage(0.0)));
    fleet.finalize();
    const std::vector<Scenario> n1 = {testbed::make_scenario(90.0, {1.0, 1.0})};
    const std::vector<Scenario> n2 = {testbed::make_scenario(180.0, {1.0, 1.0}),
                                      testbed::make_scenario(150.0, {1.0, 1.0})};
    MipOptions opts;
    opts.gap_tol = 1e-9;
    // loose budget: build only the cheap unit
    const SolveResult loose =
        solve(build_biobj_cvar(fleet, n1, n2, 60.0, 0.0, 1e9), opts);
    REQUIRE(loose.status == SolveStatus::optimal);
    CHECK(loose.first_stage.build == std::vector<int>{1, 0});
    // zero budget: everything gets built
    const SolveResult tight =
        solve(build_biobj_cvar(fleet, n1, n2, 60.0, 0.0, 0.0), opts);
    REQUIRE(tight.status == SolveStatus::optimal);
    CHECK(tight.first_stage.build == std::vector<int>{1, 1});
}

TEST_CASE("evaluation requires evaluation-space scenario sets") {
    const SystemModel system = minisystem::make_tiny_system();
    SpatialQuantileCache cache;
    const ScenarioSet gen_set = make_scenario_set(system, HourMode::normal, 8,
                                                  SeedSpace::generation, 5, &cache, 1);
    const ScenarioSet eval_set = make_scenario_set(system, HourMode::normal, 8,
                                                   SeedSpace::evaluation, 5, &cache, 1);
    std::vector<GeneratedSolution> solutions(1);
    solutions[0].decision = FleetDecision::none(system.fleet);
    CHECK_THROWS_AS(evaluate_solutions(solutions, system, gen_set, eval_set, 60.0, {}),
                    ArgumentError);
    CHECK_NOTHROW(evaluate_solutions(solutions, system, eval_set, eval_set, 60.0, {}));
}

TEST_CASE("evaluation matches a hand computation on four scenarios") {
    Fleet fleet;
    fleet.generators.push_back(minisystem::unit("a", DecisionKind::binary_build,
                                                Technology::gas_cc, 0, 50.0, 100.0, 10.0,
                                                minisystem::flat_outage(0.0)));
    fleet.finalize();
    SystemModel system = minisystem::make_tiny_system();
    system.fleet = fleet;

    ScenarioSet cost_set, risk_set;
    cost_set.space = SeedSpace::evaluation;
    risk_set.space = SeedSpace::evaluation;
    cost_set.scenarios = {testbed::make_scenario(40.0, {1.0}),
                          testbed::make_scenario(60.0, {1.0})};
    risk_set.scenarios = {testbed::make_scenario(40.0, {1.0}),
                          testbed::make_scenario(55.0, {1.0}),
                          testbed::make_scenario(70.0, {1.0}),
                          testbed::make_scenario(45.0, {0.0})};

    std::vector<GeneratedSolution> solutions(1);
    solutions[0].decision.build = {1};
    RiskSpec spec;
    spec.kind = RiskMeasureKind::cvar;
    spec.alpha = 0.25;  // top one of four
    const auto points =
        evaluate_solutions(solutions, system, cost_set, risk_set, 100.0, spec);
    REQUIRE(points.size() == 1);
    // cost: capital 100 + mean(400, 500 + 10*100) = 100 + mean(400, 1500)
    CHECK(points[0].cost == doctest::Approx(100.0 + 0.5 * (400.0 + 1500.0)));
    // shed: {0, 5, 20, 45}; top-1 mean = 45; lolp = 3/4
    CHECK(points[0].risk_cvar == doctest::Approx(45.0));
    CHECK(points[0].risk_lolp == doctest::Approx(0.75));
    CHECK(points[0].risk == points[0].risk_cvar);
}

TEST_CASE("fuller fleets never carry more extreme risk") {
    const SystemModel system = minisystem::make_tiny_system();
    SpatialQuantileCache cache;
    const ScenarioSet eval_set = make_scenario_set(system, HourMode::normal, 64,
                                                   SeedSpace::evaluation, 31, &cache, 2);
    std::vector<GeneratedSolution> solutions(2);
    solutions[0].decision = FleetDecision::none(system.fleet);
    solutions[1].decision = FleetDecision::all(system.fleet);
    const auto points = evaluate_solutions(solutions, system, eval_set, eval_set,
                                           60.0, {RiskMeasureKind::cvar, 0.1});
    CHECK(points[1].risk_cvar <= points[0].risk_cvar);
    CHECK(points[1].risk_lolp <= points[0].risk_lolp);
}

TEST_CASE("tradeoff export writes sorted, flagged, deduplicated rows") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "gridrisk_tradeoff_test";
    fs::create_directories(dir);
    std::vector<ParetoPoint> points = {point(10.0, 5.0), point(8.0, 9.0), point(7.0, 30.0),
                                       point(10.0, 5.0), point(12.0, 4.0)};
    points[0].solution.build = {1, 0};
    points[3].solution.build = {1, 0};  // duplicate decision of points[0]
    points[1].solution.build = {0, 1};
    points[2].solution.build = {1, 1};
    points[4].solution.build = {0, 0};
    const std::string csv = (dir / "tradeoff.csv").string();
    const std::string plot = (dir / "plot.json").string();
    tradeoff_export(points, 15.0, csv, plot);

    std::ifstream in(csv);
    std::string line;
    std::getline(in, line);  // units comment
    CHECK(line.rfind("# units:", 0) == 0);
    std::getline(in, line);  // header
    CHECK(line ==
          "solution_id,model_family,sweep_param,seed,cost,risk,dominated,above_cutoff");
    int rows = 0;
    double last_risk = -1.0;
    int above_cutoff = 0;
    while (std::getline(in, line)) {
        ++rows;
        const auto comma = [&](int k) {
            std::size_t pos = 0;
            for (int i = 0; i < k; ++i) pos = line.find(',', pos) + 1;
            return line.substr(pos, line.find(',', pos) - pos);
        };
        const double risk = std::stod(comma(5));
        CHECK(risk >= last_risk);
        last_risk = risk;
        above_cutoff += std::stoi(comma(7));
    }
    CHECK(rows == 4);          // duplicate decision collapsed
    CHECK(above_cutoff == 1);  // the 30-risk point is flagged, not deleted
    CHECK(fs::exists(plot));

    // empty input produces a header-only file
    tradeoff_export({}, 15.0, csv, plot);
    std::ifstream in2(csv);
    int lines = 0;
    while (std::getline(in2, line)) ++lines;
    CHECK(lines == 2);
    fs::remove_all(dir);
}
