#pragma once

// Shared builders for miniature fleets, scenarios, and brute-force oracles.
// Everything here is test-only and independent of the LP/MIP solve path:
// enumeration objectives go through merit-order dispatch and the risk module.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "gridrisk/dispatch.hpp"
#include "gridrisk/ef.hpp"
#include "gridrisk/risk.hpp"
#include "gridrisk/rng.hpp"

namespace testbed {

using namespace gridrisk;

inline GeneratorSpec make_gen(std::string id, DecisionKind kind, Technology tech,
                              double capacity, double capital, double op_cost,
                              int site = 0) {
    GeneratorSpec g;
    g.id = std::move(id);
    g.kind = kind;
    g.tech = tech;
    g.site_index = site;
    g.capital_cost_per_period = capital;
    g.op_cost_per_mw = op_cost;
    g.capacity_profile.default_value = capacity;
    if (kind == DecisionKind::continuous_build) g.capacity_upper_bound = capacity * 4.0;
    if (is_thermal(tech)) {
        g.outage_curve.points = {{-20.0, 0.3}, {0.0, 0.05}, {30.0, 0.05}, {40.0, 0.15}};
    }
    return g;
}

inline Scenario make_scenario(double demand, std::vector<double> z, int hour = 3000) {
    Scenario s;
    s.hour = hour;
    s.demand = demand;
    s.z = std::move(z);
    return s;
}

// Fleet of binary candidates (plus optional existing units), all thermal.
inline Fleet binary_fleet(Rng& rng, int n_binary, int n_existing = 0) {
    Fleet fleet;
    for (int i = 0; i < n_binary; ++i) {
        fleet.generators.push_back(make_gen("b" + std::to_string(i),
                                            DecisionKind::binary_build, Technology::gas_cc,
                                            rng.uniform(20.0, 120.0), rng.uniform(50.0, 900.0),
                                            rng.uniform(5.0, 60.0)));
    }
    for (int i = 0; i < n_existing; ++i) {
        fleet.generators.push_back(make_gen("e" + std::to_string(i),
                                            DecisionKind::existing_fixed, Technology::hydro,
                                            rng.uniform(10.0, 60.0), 0.0,
                                            rng.uniform(1.0, 20.0)));
    }
    fleet.finalize();
    return fleet;
}

inline std::vector<Scenario> random_scenarios(Rng& rng, const Fleet& fleet, int count,
                                              double demand_lo, double demand_hi) {
    std::vector<Scenario> out;
    out.reserve(count);
    for (int k = 0; k < count; ++k) {
        std::vector<double> z(fleet.size());
        for (auto& v : z) v = rng.uniform01() < 0.15 ? 0.0 : 1.0;
        out.push_back(make_scenario(rng.uniform(demand_lo, demand_hi), std::move(z)));
    }
    return out;
}

// Raw shortfall (may be negative) of scenario k at a fixed decision.
inline double raw_shortfall(const Fleet& fleet, const FleetDecision& x, const Scenario& s) {
    double total = 0.0;
    for (int i = 0; i < fleet.size(); ++i) total += available_capacity(fleet, x, s, i);
    return s.demand - total;
}

inline FleetDecision decision_from_mask(const Fleet& fleet, unsigned mask) {
    FleetDecision x = FleetDecision::none(fleet);
    for (std::size_t slot = 0; slot < x.build.size(); ++slot) {
        x.build[slot] = (mask >> slot) & 1u;
    }
    return x;
}

// Exhaustive optimum of the base family over binary-only fleets.
inline double enumerate_base(const Fleet& fleet, const std::vector<Scenario>& n1,
                             double lambda, FleetDecision* arg_best = nullptr) {
    double best = std::numeric_limits<double>::infinity();
    const unsigned patterns = 1u << fleet.binary_indices.size();
    for (unsigned mask = 0; mask < patterns; ++mask) {
        const FleetDecision x = decision_from_mask(fleet, mask);
        const double obj = base_objective(fleet, n1, lambda, x);
        if (obj < best) {
            best = obj;
            if (arg_best != nullptr) *arg_best = x;
        }
    }
    return best;
}

// Exhaustive optimum of the cvar-bounded family; the risk side uses the
// discrete infimum over the raw shortfalls, mirroring the linear formulation.
inline double enumerate_biobj_cvar(const Fleet& fleet, const std::vector<Scenario>& n1,
                                   const std::vector<Scenario>& n2, double lambda,
                                   double alpha, double bound_u,
                                   FleetDecision* arg_best = nullptr) {
    double best = std::numeric_limits<double>::infinity();
    const unsigned patterns = 1u << fleet.binary_indices.size();
    for (unsigned mask = 0; mask < patterns; ++mask) {
        const FleetDecision x = decision_from_mask(fleet, mask);
        std::vector<double> shortfalls(n2.size());
        for (std::size_t k = 0; k < n2.size(); ++k) {
            shortfalls[k] = raw_shortfall(fleet, x, n2[k]);
        }
        if (cvar(LossSample::uniform(std::move(shortfalls)), alpha) > bound_u + 1e-9) {
            continue;
        }
        const double obj = base_objective(fleet, n1, lambda, x);
        if (obj < best) {
            best = obj;
            if (arg_best != nullptr) *arg_best = x;
        }
    }
    return best;
}

// Exhaustive optimum of the shed-probability family (true chance-constraint
// semantics: at most floor(|n2| U) scenarios with positive shed).
inline double enumerate_biobj_lolp(const Fleet& fleet, const std::vector<Scenario>& n1,
                                   const std::vector<Scenario>& n2, double lambda,
                                   double bound_u, FleetDecision* arg_best = nullptr) {
    double best = std::numeric_limits<double>::infinity();
    const long allowed = static_cast<long>(
        std::floor(bound_u * static_cast<double>(n2.size()) + 1e-9));
    const unsigned patterns = 1u << fleet.binary_indices.size();
    for (unsigned mask = 0; mask < patterns; ++mask) {
        const FleetDecision x = decision_from_mask(fleet, mask);
        long shed_count = 0;
        for (const auto& s : n2) {
            if (raw_shortfall(fleet, x, s) > 1e-9) ++shed_count;
        }
        if (shed_count > allowed) continue;
        const double obj = base_objective(fleet, n1, lambda, x);
        if (obj < best) {
            best = obj;
            if (arg_best != nullptr) *arg_best = x;
        }
    }
    return best;
}

}  // namespace testbed
