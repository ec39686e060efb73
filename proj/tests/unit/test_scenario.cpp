#include <doctest.h>

#include <map>

#include "gridrisk/calendar.hpp"
#include "gridrisk/errors.hpp"
#include "gridrisk/scenario.hpp"
#include "testbed.hpp"

using namespace gridrisk;

TEST_CASE("calendar basics") {
    CHECK(month_of_day(1) == 1);
    CHECK(month_of_day(31) == 1);
    CHECK(month_of_day(32) == 2);
    CHECK(month_of_day(365) == 12);
    CHECK(season_of_month(12) == 0);
    CHECK(season_of_month(1) == 0);
    CHECK(season_of_month(4) == 1);
    CHECK(season_of_month(7) == 2);
    CHECK(season_of_month(10) == 3);
    CHECK(day_of_hour(24) == 1);
    CHECK(day_of_hour(25) == 2);
    CHECK(hour_of_day(24) == 24);
    CHECK(hour_of_day(26) == 2);
    CHECK(hour_of_year(2, 2) == 26);
    CHECK_THROWS_AS(month_of_day(0), ArgumentError);
    CHECK_THROWS_AS(day_of_hour(8761), ArgumentError);
}

TEST_CASE("sample_hours stratification") {
    const auto hours = sample_hours(HourMode::normal, 8, 99);
    REQUIRE(hours.size() == 8);
    std::map<int, int> per_season;
    for (int h : hours) {
        CHECK(h % 2 == 0);  // even hours only
        ++per_season[season_of_month(month_of_day(day_of_hour(h)))];
    }
    for (const auto& [season, count] : per_season) CHECK(count == 2);
    CHECK(per_season.size() == 4);
}

TEST_CASE("extreme mode draws only from the four anchor months") {
    const auto hours = sample_hours(HourMode::extreme, 40, 7);
    for (int h : hours) {
        const int m = month_of_day(day_of_hour(h));
        CHECK((m == 1 || m == 2 || m == 7 || m == 8));
    }
}

TEST_CASE("sample_hours determinism and divisibility") {
    CHECK(sample_hours(HourMode::normal, 16, 5) == sample_hours(HourMode::normal, 16, 5));
    CHECK(sample_hours(HourMode::normal, 16, 5) != sample_hours(HourMode::normal, 16, 6));
    CHECK_THROWS_AS(sample_hours(HourMode::normal, 6, 5), ArgumentError);
    CHECK_THROWS_AS(sample_hours(HourMode::normal, 0, 5), ArgumentError);
}

namespace {

DemandModel constant_demand(int sites, double value) {
    DemandModel m;
    m.sites.resize(sites);
    for (auto& s : m.sites) {
        s.beta = Eigen::VectorXd::Zero(DemandFeatures::kCount);
        s.beta(0) = value;
    }
    return m;
}

TemperatureField field_at(int hour, int day, std::vector<double> values) {
    TemperatureField f;
    f.hour_of_day = hour;
    f.day_of_year = day;
    f.values = std::move(values);
    return f;
}

}  // namespace

TEST_CASE("build_scenarios is deterministic and shaped correctly") {
    Fleet fleet;
    fleet.generators.push_back(testbed::make_gen("th", DecisionKind::binary_build,
                                                 Technology::gas_cc, 50.0, 5.0, 10.0));
    fleet.generators.push_back(testbed::make_gen("w", DecisionKind::continuous_build,
                                                 Technology::wind, 0.4, 2.0, 0.0));
    fleet.generators.push_back(testbed::make_gen("s", DecisionKind::continuous_build,
                                                 Technology::solar, 0.3, 2.0, 0.0));
    fleet.finalize();
    const DemandModel demand = constant_demand(2, 60.0);
    std::vector<TemperatureField> fields = {field_at(14, 100, {5.0, 10.0}),
                                            field_at(2, 200, {20.0, 25.0})};
    const auto a = build_scenarios(fleet, demand, fields, 123);
    const auto b = build_scenarios(fleet, demand, fields, 123);
    REQUIRE(a.size() == 2);
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k].hour == hour_of_year(fields[k].day_of_year, fields[k].hour_of_day));
        CHECK(a[k].demand == doctest::Approx(120.0));
        REQUIRE(a[k].z.size() == 3);
        CHECK(a[k].z == b[k].z);
        CHECK((a[k].z[0] == 0.0 || a[k].z[0] == 1.0));  // thermal is Bernoulli
        CHECK(a[k].z[1] >= 0.0);
        CHECK(a[k].z[1] <= 1.0);
    }
    const auto c = build_scenarios(fleet, demand, fields, 124);
    bool any_difference = false;
    for (std::size_t k = 0; k < a.size(); ++k) any_difference |= a[k].z != c[k].z;
    // different seed, same fields: only the draws may change
    CHECK(a[0].demand == c[0].demand);
    (void)any_difference;
}

TEST_CASE("empty fleet yields scenarios with empty availability") {
    Fleet fleet;
    fleet.finalize();
    const auto scenarios = build_scenarios(fleet, constant_demand(1, 10.0),
                                           {field_at(14, 50, {0.0})}, 9);
    REQUIRE(scenarios.size() == 1);
    CHECK(scenarios[0].z.empty());
    CHECK(scenarios[0].demand == doctest::Approx(10.0));
}

TEST_CASE("site index outside the field raises") {
    Fleet fleet;
    fleet.generators.push_back(testbed::make_gen("th", DecisionKind::binary_build,
                                                 Technology::gas_cc, 50.0, 5.0, 10.0, 3));
    fleet.finalize();
    CHECK_THROWS_AS(build_scenarios(fleet, constant_demand(1, 10.0),
                                    {field_at(14, 50, {0.0})}, 9),
                    ArgumentError);
}

TEST_CASE("thermal availability rate tracks the outage curve") {
    Fleet fleet;
    GeneratorSpec g = testbed::make_gen("th", DecisionKind::binary_build,
                                        Technology::gas_cc, 50.0, 5.0, 10.0);
    g.outage_curve.points = {{-20.0, 0.4}, {0.0, 0.1}, {20.0, 0.05}};
    fleet.generators.push_back(g);
    fleet.finalize();
    const DemandModel demand = constant_demand(1, 10.0);

    for (double temp : {-20.0, -10.0, 0.0, 20.0}) {
        const int n = 10000;
        std::vector<TemperatureField> fields(n, field_at(14, 40, {temp}));
        const auto scenarios = build_scenarios(fleet, demand, fields, 2027);
        double on = 0.0;
        for (const auto& s : scenarios) on += s.z[0];
        const double expected = 1.0 - g.outage_curve.probability_at(temp);
        CHECK(on / n == doctest::Approx(expected).epsilon(0.02).scale(1.0));
    }
}
