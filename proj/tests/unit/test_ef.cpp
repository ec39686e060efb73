#include <doctest.h>

#include <sstream>

#include "gridrisk/ef.hpp"
#include "gridrisk/errors.hpp"
#include "gridrisk/mip.hpp"
#include "testbed.hpp"

using namespace gridrisk;
using namespace testbed;

namespace {

MipOptions exact_opts() {
    MipOptions opts;
    opts.gap_tol = 1e-9;
    return opts;
}

}  // namespace

TEST_CASE("base extensive form has the expected shape") {
    Rng rng(901);
    const Fleet fleet = binary_fleet(rng, 3);
    const auto scenarios = random_scenarios(rng, fleet, 4, 50.0, 200.0);
    const ExtensiveFormInstance inst = build_base(fleet, scenarios, 100.0);
    CHECK(inst.variable_count() == 3 + 3 * 4 + 4);  // x, y, r
    CHECK(inst.row_count() == 4 + 12);              // demand + capacity
    CHECK(inst.family == ModelFamily::base);
}

TEST_CASE("base with zero demand builds nothing") {
    Rng rng(902);
    const Fleet fleet = binary_fleet(rng, 2);
    std::vector<Scenario> scenarios = {
        make_scenario(0.0, std::vector<double>(fleet.size(), 1.0))};
    const SolveResult sol = solve(build_base(fleet, scenarios, 100.0), exact_opts());
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(sol.objective == doctest::Approx(0.0));
    for (int b : sol.first_stage.build) CHECK(b == 0);
}

TEST_CASE("base objective at a fixed decision equals mean dispatch cost") {
    Rng rng(903);
    const Fleet fleet = binary_fleet(rng, 4, 2);
    const auto scenarios = random_scenarios(rng, fleet, 5, 50.0, 350.0);
    FleetDecision x = FleetDecision::none(fleet);
    x.build = {1, 0, 1, 1};

    ExtensiveFormInstance inst = build_base(fleet, scenarios, 95.0);
    std::vector<std::pair<std::string, int>> fixes;
    for (std::size_t slot = 0; slot < fleet.binary_indices.size(); ++slot) {
        fixes.emplace_back(fleet.generators[fleet.binary_indices[slot]].id, x.build[slot]);
    }
    const SolveResult sol = solve(fix_partial_fleet(std::move(inst), fixes), exact_opts());
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(sol.objective ==
          doctest::Approx(base_objective(fleet, scenarios, 95.0, x)).epsilon(1e-9));
}

TEST_CASE("cvar budget of infinity reduces to the base model") {
    Rng rng(904);
    const Fleet fleet = binary_fleet(rng, 4);
    const auto n1 = random_scenarios(rng, fleet, 4, 50.0, 300.0);
    const auto n2 = random_scenarios(rng, fleet, 6, 100.0, 500.0);
    const double inf = std::numeric_limits<double>::infinity();
    const ExtensiveFormInstance with_budget =
        build_biobj_cvar(fleet, n1, n2, 120.0, 0.1, inf);
    const ExtensiveFormInstance plain = build_base(fleet, n1, 120.0);
    CHECK(with_budget.variable_count() == plain.variable_count());
    CHECK(with_budget.row_count() == plain.row_count());
    const double obj_a = solve(with_budget, exact_opts()).objective;
    const double obj_b = solve(plain, exact_opts()).objective;
    CHECK(obj_a == doctest::Approx(obj_b).epsilon(1e-12));
}

TEST_CASE("cvar budget zero with alpha zero forces zero expected shortfall") {
    // two binaries, demand 100 in both risk scenarios; only building both
    // drives the mean raw shortfall to zero or below
    Fleet fleet;
    fleet.generators.push_back(
        make_gen("g0", DecisionKind::binary_build, Technology::gas_cc, 60.0, 10.0, 5.0));
    fleet.generators.push_back(
        make_gen("g1", DecisionKind::binary_build, Technology::gas_cc, 45.0, 12.0, 7.0));
    fleet.finalize();
    const std::vector<Scenario> n1 = {make_scenario(80.0, {1.0, 1.0})};
    const std::vector<Scenario> n2 = {make_scenario(100.0, {1.0, 1.0}),
                                      make_scenario(95.0, {1.0, 1.0})};
    const double truth = enumerate_biobj_cvar(fleet, n1, n2, 100.0, 0.0, 0.0);
    const SolveResult sol =
        solve(build_biobj_cvar(fleet, n1, n2, 100.0, 0.0, 0.0), exact_opts());
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(sol.first_stage.build == std::vector<int>{1, 1});
    CHECK(sol.objective == doctest::Approx(truth).epsilon(1e-9));
}

TEST_CASE("minimal feasible cvar budget at fixed x matches the risk module") {
    Rng rng(905);
    for (int trial = 0; trial < 20; ++trial) {
        const Fleet fleet = binary_fleet(rng, 4, 1);
        const auto n1 = random_scenarios(rng, fleet, 3, 50.0, 250.0);
        const auto n2 = random_scenarios(rng, fleet, 8, 100.0, 600.0);
        FleetDecision x = FleetDecision::none(fleet);
        for (auto& b : x.build) b = rng.uniform01() < 0.5 ? 1 : 0;
        const double alpha = rng.uniform(0.0, 0.6);

        std::vector<double> shortfalls;
        for (const auto& s : n2) shortfalls.push_back(raw_shortfall(fleet, x, s));
        const double minimal_u = cvar(LossSample::uniform(shortfalls), alpha);

        std::vector<std::pair<std::string, int>> fixes;
        for (std::size_t slot = 0; slot < fleet.binary_indices.size(); ++slot) {
            fixes.emplace_back(fleet.generators[fleet.binary_indices[slot]].id,
                               x.build[slot]);
        }
        if (minimal_u >= 0.0) {
            // feasible exactly at the budget
            const auto feasible = solve(
                fix_partial_fleet(build_biobj_cvar(fleet, n1, n2, 100.0, alpha,
                                                   minimal_u + 1e-7),
                                  fixes),
                exact_opts());
            CHECK(feasible.status == SolveStatus::optimal);
            // infeasible just below it
            const auto infeasible = solve(
                fix_partial_fleet(build_biobj_cvar(fleet, n1, n2, 100.0, alpha,
                                                   std::max(0.0, minimal_u - 1e-4)),
                                  fixes),
                exact_opts());
            if (minimal_u > 1e-4) CHECK(infeasible.status == SolveStatus::infeasible);
        }
    }
}

TEST_CASE("positive-part cvar agrees with the raw-shortfall budget when the tail sheds") {
    // when the value-at-risk level is nonnegative the budget computed from raw
    // shortfalls coincides with cvar of q_extreme
    Fleet fleet;
    fleet.generators.push_back(
        make_gen("g0", DecisionKind::binary_build, Technology::gas_cc, 40.0, 5.0, 5.0));
    fleet.finalize();
    const std::vector<Scenario> n2 = {make_scenario(100.0, {1.0}),
                                      make_scenario(90.0, {1.0}),
                                      make_scenario(20.0, {1.0})};
    FleetDecision x = FleetDecision::all(fleet);
    std::vector<double> raw, shed;
    for (const auto& s : n2) {
        raw.push_back(raw_shortfall(fleet, x, s));
        shed.push_back(q_extreme(x, s, fleet));
    }
    const double alpha = 0.5;
    CHECK(cvar(LossSample::uniform(raw), alpha) ==
          doctest::Approx(cvar(LossSample::uniform(shed), alpha)).epsilon(1e-12));
}

TEST_CASE("cvar family matches enumeration on random instances") {
    Rng rng(906);
    for (int trial = 0; trial < 25; ++trial) {
        const int n_bin = 2 + static_cast<int>(rng.below(7));
        const Fleet fleet = binary_fleet(rng, n_bin, static_cast<int>(rng.below(2)));
        const auto n1 = random_scenarios(rng, fleet, 2 + static_cast<int>(rng.below(4)),
                                         50.0, 300.0);
        const auto n2 = random_scenarios(rng, fleet, 2 + static_cast<int>(rng.below(6)),
                                         50.0, 500.0);
        const double alpha = rng.uniform(0.0, 0.5);
        const double budget = rng.uniform(0.0, 300.0);
        const double lambda = rng.uniform(80.0, 130.0);

        const double truth = enumerate_biobj_cvar(fleet, n1, n2, lambda, alpha, budget);
        const SolveResult sol =
            solve(build_biobj_cvar(fleet, n1, n2, lambda, alpha, budget), exact_opts());
        if (std::isinf(truth)) {
            CHECK(sol.status == SolveStatus::infeasible);
        } else {
            REQUIRE(sol.status == SolveStatus::optimal);
            CHECK(std::abs(sol.objective - truth) / std::max(1.0, std::abs(truth)) < 1e-6);
        }
    }
}

TEST_CASE("lolp budget one reduces to base and budget zero serves everything") {
    Rng rng(907);
    const Fleet fleet = binary_fleet(rng, 4);
    const auto n1 = random_scenarios(rng, fleet, 3, 50.0, 200.0);
    auto n2 = random_scenarios(rng, fleet, 5, 50.0, 250.0);
    for (auto& s : n2) {
        for (auto& z : s.z) z = 1.0;  // keep full-build able to serve everything
    }
    const double lambda = 100.0;

    const double base_truth = enumerate_base(fleet, n1, lambda);
    const SolveResult relaxed =
        solve(build_biobj_lolp(fleet, n1, n2, lambda, 1.0), exact_opts());
    REQUIRE(relaxed.status == SolveStatus::optimal);
    CHECK(relaxed.objective == doctest::Approx(base_truth).epsilon(1e-9));

    const SolveResult strict =
        solve(build_biobj_lolp(fleet, n1, n2, lambda, 0.0), exact_opts());
    if (strict.status == SolveStatus::optimal) {
        for (const auto& s : n2) {
            CHECK(raw_shortfall(fleet, strict.first_stage, s) <= 1e-6);
        }
    }
}

TEST_CASE("lolp family matches enumeration on random instances") {
    Rng rng(908);
    for (int trial = 0; trial < 20; ++trial) {
        const int n_bin = 2 + static_cast<int>(rng.below(7));
        const Fleet fleet = binary_fleet(rng, n_bin);
        const auto n1 = random_scenarios(rng, fleet, 2 + static_cast<int>(rng.below(4)),
                                         50.0, 300.0);
        const auto n2 = random_scenarios(rng, fleet, 2 + static_cast<int>(rng.below(6)),
                                         50.0, 450.0);
        const double budget = rng.uniform(0.0, 1.0);
        const double lambda = rng.uniform(80.0, 130.0);

        const double truth = enumerate_biobj_lolp(fleet, n1, n2, lambda, budget);
        const SolveResult sol =
            solve(build_biobj_lolp(fleet, n1, n2, lambda, budget), exact_opts());
        if (std::isinf(truth)) {
            CHECK(sol.status == SolveStatus::infeasible);
        } else {
            REQUIRE(sol.status == SolveStatus::optimal);
            CHECK(std::abs(sol.objective - truth) / std::max(1.0, std::abs(truth)) < 1e-6);
        }
    }
}

TEST_CASE("big-M hand case") {
    // single binary, peak availability 100, all demands 50, budget 0:
    // cover forces x=1, V_k is the scenario availability
    Fleet fleet;
    fleet.generators.push_back(
        make_gen("g0", DecisionKind::binary_build, Technology::gas_cc, 100.0, 10.0, 5.0));
    fleet.finalize();
    std::vector<Scenario> n2 = {make_scenario(50.0, {1.0}), make_scenario(50.0, {0.4}),
                                make_scenario(50.0, {0.0})};
    const BigMResult result = compute_big_m(fleet, n2, 0.0);
    CHECK(result.cover_level == doctest::Approx(50.0));
    CHECK(result.values[0] == doctest::Approx(0.0));   // 50 - 100 clipped at 0
    CHECK(result.values[1] == doctest::Approx(10.0));  // 50 - 40
    CHECK(result.values[2] == doctest::Approx(50.0));  // 50 - 0
}

TEST_CASE("big-M is zero for zero demand") {
    Rng rng(909);
    const Fleet fleet = binary_fleet(rng, 3);
    std::vector<Scenario> n2(4, make_scenario(0.0, std::vector<double>(fleet.size(), 1.0)));
    const BigMResult result = compute_big_m(fleet, n2, 0.2);
    for (double m : result.values) CHECK(m == 0.0);
}

TEST_CASE("big-M validity over every cover-feasible decision") {
    Rng rng(910);
    for (int trial = 0; trial < 15; ++trial) {
        const Fleet fleet = binary_fleet(rng, 2 + static_cast<int>(rng.below(6)),
                                         static_cast<int>(rng.below(2)));
        const auto n2 =
            random_scenarios(rng, fleet, 2 + static_cast<int>(rng.below(6)), 50.0, 400.0);
        const double budget = rng.uniform(0.0, 0.8);
        const BigMResult result = compute_big_m(fleet, n2, budget);

        std::vector<double> peak(fleet.size(), 0.0);
        for (int g = 0; g < fleet.size(); ++g) {
            for (const auto& s : n2) {
                peak[g] = std::max(peak[g],
                                   s.z[g] * fleet.generators[g].capacity_profile.value(s.hour));
            }
        }
        const unsigned patterns = 1u << fleet.binary_indices.size();
        for (unsigned mask = 0; mask < patterns; ++mask) {
            const FleetDecision x = decision_from_mask(fleet, mask);
            double cover = 0.0;
            for (int g = 0; g < fleet.size(); ++g) {
                if (fleet.generators[g].kind == DecisionKind::existing_fixed) {
                    cover += peak[g];
                } else if (fleet.generators[g].kind == DecisionKind::binary_build) {
                    const auto it = std::find(fleet.binary_indices.begin(),
                                              fleet.binary_indices.end(), g);
                    cover += x.build[it - fleet.binary_indices.begin()] * peak[g];
                }
            }
            if (cover < result.cover_level - 1e-9) continue;  // not cover-feasible
            for (std::size_t k = 0; k < n2.size(); ++k) {
                CHECK(raw_shortfall(fleet, x, n2[k]) <= result.values[k] + 1e-6);
            }
        }
    }
}

TEST_CASE("epsilon-constraint sweep is monotone in the budget") {
    Rng rng(911);
    const Fleet fleet = binary_fleet(rng, 6, 1);
    const auto n1 = random_scenarios(rng, fleet, 4, 100.0, 400.0);
    const auto n2 = random_scenarios(rng, fleet, 6, 100.0, 600.0);
    double previous = std::numeric_limits<double>::infinity();
    for (double budget : {0.0, 20.0, 50.0, 120.0, 300.0, 1e6}) {
        const SolveResult sol =
            solve(build_biobj_cvar(fleet, n1, n2, 110.0, 0.1, budget), exact_opts());
        if (sol.status != SolveStatus::optimal) continue;
        CHECK(sol.objective <= previous + 1e-6);
        previous = sol.objective;
    }
}

TEST_CASE("mps export round trips through a text inspection") {
    Rng rng(912);
    const Fleet fleet = binary_fleet(rng, 2);
    const auto n1 = random_scenarios(rng, fleet, 2, 50.0, 150.0);
    const auto n2 = random_scenarios(rng, fleet, 2, 50.0, 150.0);
    const ExtensiveFormInstance inst = build_biobj_cvar(fleet, n1, n2, 100.0, 0.1, 25.0);
    std::ostringstream mps;
    inst.write_mps(mps);
    const std::string text = mps.str();
    CHECK(text.find("NAME") == 0);
    CHECK(text.find("ROWS") != std::string::npos);
    CHECK(text.find("COLUMNS") != std::string::npos);
    CHECK(text.find("'INTORG'") != std::string::npos);
    CHECK(text.find("'INTEND'") != std::string::npos);
    CHECK(text.find("RHS") != std::string::npos);
    CHECK(text.find("BOUNDS") != std::string::npos);
    CHECK(text.find("ENDATA") != std::string::npos);
    CHECK(text.find(" FR BND       z") != std::string::npos);
    CHECK(text.find("cv") != std::string::npos);
}
