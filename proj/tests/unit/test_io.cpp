#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "gridrisk/config.hpp"
#include "gridrisk/errors.hpp"
#include "gridrisk/io.hpp"
#include "minisystem.hpp"
#include "testbed.hpp"

using namespace gridrisk;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("gridrisk_io_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("fleet json round trip") {
    TempDir dir;
    const Fleet fleet = minisystem::make_fleet(10);
    io::write_fleet(fleet, dir.file("fleet.json"));
    const Fleet back = io::read_fleet(dir.file("fleet.json"));
    REQUIRE(back.size() == fleet.size());
    for (int i = 0; i < fleet.size(); ++i) {
        CHECK(back.generators[i].id == fleet.generators[i].id);
        CHECK(back.generators[i].kind == fleet.generators[i].kind);
        CHECK(back.generators[i].tech == fleet.generators[i].tech);
        CHECK(back.generators[i].op_cost_per_mw == fleet.generators[i].op_cost_per_mw);
        CHECK(back.generators[i].capacity_profile.default_value ==
              fleet.generators[i].capacity_profile.default_value);
        CHECK(back.generators[i].outage_curve.points ==
              fleet.generators[i].outage_curve.points);
    }
    CHECK(back.binary_indices == fleet.binary_indices);
}

TEST_CASE("marginals and copula round trip") {
    TempDir dir;
    const auto marginals = minisystem::make_marginals(4);
    io::write_marginals(marginals, dir.file("m.json"));
    const auto back = io::read_marginals(dir.file("m.json"));
    REQUIRE(back.size() == marginals.size());
    for (const auto& [hour, sites] : marginals) {
        REQUIRE(back.count(hour) == 1);
        for (std::size_t l = 0; l < sites.size(); ++l) {
            CHECK(back.at(hour)[l].nu == sites[l].nu);
            CHECK(back.at(hour)[l].phi0(100.0) == doctest::Approx(sites[l].phi0(100.0)));
            CHECK(back.at(hour)[l].tau1(250.0) == doctest::Approx(sites[l].tau1(250.0)));
        }
    }

    const CopulaModel copula = minisystem::make_copula(4);
    io::write_copula(copula, dir.file("c.json"));
    const CopulaModel cback = io::read_copula(dir.file("c.json"));
    CHECK(cback.site_coords == copula.site_coords);
    CHECK(cback.gamma_by_month == copula.gamma_by_month);
    CHECK(cback.cholesky_cache.size() == 12);
}

TEST_CASE("demand model round trip") {
    TempDir dir;
    const DemandModel model = minisystem::make_demand(3);
    io::write_demand_model(model, dir.file("d.json"));
    const DemandModel back = io::read_demand_model(dir.file("d.json"));
    REQUIRE(back.site_count() == 3);
    for (int l = 0; l < 3; ++l) {
        CHECK((back.sites[l].beta - model.sites[l].beta).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("scenario csv round trips losslessly at six decimals") {
    TempDir dir;
    const Fleet fleet = minisystem::make_fleet(10);
    std::vector<Scenario> scenarios;
    Rng rng(40);
    for (int k = 0; k < 7; ++k) {
        Scenario s;
        s.hour = 1 + static_cast<int>(rng.below(8760));
        s.demand = rng.uniform(0.0, 3000.0);
        s.z.resize(fleet.size());
        for (auto& z : s.z) z = rng.uniform01();
        s.temps.hour_of_day = 14;
        s.temps.day_of_year = 100;
        for (int l = 0; l < 10; ++l) s.temps.values.push_back(rng.uniform(-30.0, 35.0));
        scenarios.push_back(std::move(s));
    }
    io::write_scenarios_csv(scenarios, fleet, dir.file("s.csv"), dir.file("t.csv"));
    const auto back = io::read_scenarios_csv(fleet, dir.file("s.csv"), dir.file("t.csv"));
    REQUIRE(back.size() == scenarios.size());
    for (std::size_t k = 0; k < scenarios.size(); ++k) {
        CHECK(back[k].hour == scenarios[k].hour);
        CHECK(back[k].demand == doctest::Approx(scenarios[k].demand).epsilon(1e-6));
        for (std::size_t i = 0; i < back[k].z.size(); ++i) {
            CHECK(std::abs(back[k].z[i] - scenarios[k].z[i]) < 1e-6);
        }
        CHECK(back[k].temps.day_of_year == 100);
    }
    // a second write of what was read reproduces the file byte for byte
    io::write_scenarios_csv(back, fleet, dir.file("s2.csv"), dir.file("t2.csv"));
    std::ifstream a(dir.file("s.csv")), b(dir.file("s2.csv"));
    std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
    std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
    CHECK(sa == sb);
}

TEST_CASE("units header line is present on csv outputs") {
    TempDir dir;
    io::write_temperature_csv({}, dir.file("t.csv"));
    std::ifstream in(dir.file("t.csv"));
    std::string first;
    std::getline(in, first);
    CHECK(first.rfind("# units:", 0) == 0);
}

TEST_CASE("solutions round trip with provenance") {
    TempDir dir;
    const Fleet fleet = minisystem::make_fleet(10);
    std::vector<GeneratedSolution> solutions(2);
    solutions[0].decision = FleetDecision::all(fleet);
    solutions[0].prov = {ModelFamily::biobj_cvar, 500.0, 99u, 3, SolveStatus::optimal, 1234.5};
    solutions[1].decision = FleetDecision::none(fleet);
    solutions[1].prov = {ModelFamily::base, 5000.0, 7u, 0, SolveStatus::gap_limit, 88.25};
    io::write_solutions(solutions, fleet, dir.file("sol.json"));
    const auto back = io::read_solutions(fleet, dir.file("sol.json"));
    REQUIRE(back.size() == 2);
    CHECK(back[0].decision.build == solutions[0].decision.build);
    CHECK(back[0].decision.capacity == solutions[0].decision.capacity);
    CHECK(back[0].prov.family == ModelFamily::biobj_cvar);
    CHECK(back[0].prov.sweep_value == 500.0);
    CHECK(back[0].prov.status == SolveStatus::optimal);
    CHECK(back[1].prov.status == SolveStatus::gap_limit);
    CHECK(back[1].prov.objective == 88.25);
}

TEST_CASE("results csv carries the documented columns") {
    TempDir dir;
    ParetoPoint p;
    p.cost = 1000.0;
    p.risk_cvar = 12.5;
    p.risk_lolp = 0.01;
    p.prov.family = ModelFamily::base;
    p.prov.status = SolveStatus::optimal;
    io::write_results_csv({p}, dir.file("r.csv"));
    std::ifstream in(dir.file("r.csv"));
    std::string line;
    std::getline(in, line);  // units
    std::getline(in, line);  // header
    CHECK(line ==
          "solution_id,model_family,sweep_param,seed,cost,risk_cvar,risk_lolp,dominated,"
          "solver_status");
    std::getline(in, line);
    CHECK(line.find("base") != std::string::npos);
    CHECK(line.find("optimal") != std::string::npos);
}

TEST_CASE("config loads, validates, hashes, and honors the environment") {
    TempDir dir;
    {
        std::ofstream out(dir.file("config.json"));
        out << R"({
  "paths": {"output_dir": "outdir"},
  "experiment": {"model_family": "base", "n1": 8, "n2": 8, "replications": 2,
                  "sweep": [100.0, 200.0], "lambda": 60.0},
  "solver": {"gap_tol": 1e-5},
  "evaluation": {"n_cost": 16, "n_risk": 32, "cutoff_risk": 15000.0},
  "jobs": 2
})";
    }
    RunConfig config = RunConfig::load(dir.file("config.json"));
    CHECK(config.paths.output_dir == "outdir");
    CHECK(config.experiment.model_family == "base");
    CHECK(config.experiment.sweep == std::vector<double>{100.0, 200.0});
    CHECK(config.solver.gap_tol == 1e-5);
    CHECK(config.evaluation.cutoff_risk == 15000.0);
    CHECK(config.jobs == 2);
    const std::string h1 = config.hash();
    CHECK(h1.size() == 16);
    config.experiment.lambda = 61.0;
    CHECK(config.hash() != h1);

    // environment override for the output directory
    setenv("GRIDRISK_OUTPUT_DIR", "env_out", 1);
    const RunConfig with_env = RunConfig::load(dir.file("config.json"));
    CHECK(with_env.paths.output_dir == "env_out");
    unsetenv("GRIDRISK_OUTPUT_DIR");

    CHECK_THROWS_AS(config.validate(true, false, false, false, false), ConfigError);
    CHECK_THROWS_AS(RunConfig::load(dir.file("missing.json")), ConfigError);
}

TEST_CASE("schema version is checked") {
    TempDir dir;
    {
        std::ofstream out(dir.file("bad.json"));
        out << R"({"schema_version": 2, "generators": []})";
    }
    CHECK_THROWS_AS(io::read_fleet(dir.file("bad.json")), ConfigError);
}
