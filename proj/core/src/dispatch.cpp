#include "gridrisk/dispatch.hpp"

#include <algorithm>
#include <numeric>

#include "gridrisk/errors.hpp"
#include "gridrisk/simplex.hpp"

namespace gridrisk {

FleetDecision FleetDecision::none(const Fleet& fleet) {
    FleetDecision x;
    x.build.assign(fleet.binary_indices.size(), 0);
    x.capacity.assign(fleet.continuous_indices.size(), 0.0);
    return x;
}

FleetDecision FleetDecision::all(const Fleet& fleet) {
    FleetDecision x;
    x.build.assign(fleet.binary_indices.size(), 1);
    x.capacity.resize(fleet.continuous_indices.size());
    for (std::size_t c = 0; c < fleet.continuous_indices.size(); ++c) {
        x.capacity[c] = fleet.generators[fleet.continuous_indices[c]].capacity_upper_bound;
    }
    return x;
}

void FleetDecision::validate(const Fleet& fleet) const {
    if (build.size() != fleet.binary_indices.size() ||
        capacity.size() != fleet.continuous_indices.size()) {
        throw ArgumentError("FleetDecision: size does not match the fleet");
    }
    for (int b : build) {
        if (b != 0 && b != 1) throw ArgumentError("FleetDecision: build flags must be 0/1");
    }
    for (std::size_t c = 0; c < capacity.size(); ++c) {
        const auto& gen = fleet.generators[fleet.continuous_indices[c]];
        if (capacity[c] < -1e-9 || capacity[c] > gen.capacity_upper_bound + 1e-9) {
            throw ArgumentError("FleetDecision: capacity outside bounds for '" + gen.id + "'");
        }
    }
}

double available_capacity(const Fleet& fleet, const FleetDecision& x,
                          const Scenario& s, int gen_index) {
    const auto& gen = fleet.generators[gen_index];
    const double base = gen.capacity_profile.value(s.hour) * s.z[gen_index];
    switch (gen.kind) {
        case DecisionKind::existing_fixed:
            return base;
        case DecisionKind::binary_build: {
            const auto it = std::find(fleet.binary_indices.begin(),
                                      fleet.binary_indices.end(), gen_index);
            return x.build[it - fleet.binary_indices.begin()] ? base : 0.0;
        }
        case DecisionKind::continuous_build: {
            const auto it = std::find(fleet.continuous_indices.begin(),
                                      fleet.continuous_indices.end(), gen_index);
            return x.capacity[it - fleet.continuous_indices.begin()] * base;
        }
    }
    return 0.0;
}

DispatchResult q_normal(const FleetDecision& x, const Scenario& s, const Fleet& fleet,
                        double lambda) {
    x.validate(fleet);
    if (static_cast<int>(s.z.size()) != fleet.size()) {
        throw ArgumentError("q_normal: scenario availability does not match the fleet");
    }

    std::vector<int> order(fleet.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const double ca = fleet.generators[a].op_cost_per_mw;
        const double cb = fleet.generators[b].op_cost_per_mw;
        if (ca != cb) return ca < cb;
        return fleet.generators[a].id < fleet.generators[b].id;
    });

    DispatchResult result;
    result.power.assign(fleet.size(), 0.0);
    double remaining = s.demand;
    for (int i : order) {
        if (remaining <= 0.0) break;
        const auto& gen = fleet.generators[i];
        if (gen.op_cost_per_mw >= lambda) break;  // shedding is cheaper from here on
        const double cap = available_capacity(fleet, x, s, i);
        if (cap <= 0.0) continue;
        const double take = std::min(cap, remaining);
        result.power[i] = take;
        result.cost += take * gen.op_cost_per_mw;
        remaining -= take;
    }
    result.shed = std::max(remaining, 0.0);
    result.cost += lambda * result.shed;
    return result;
}

double q_extreme(const FleetDecision& x, const Scenario& s, const Fleet& fleet) {
    x.validate(fleet);
    double total = 0.0;
    for (int i = 0; i < fleet.size(); ++i) total += available_capacity(fleet, x, s, i);
    return std::max(s.demand - total, 0.0);
}

DispatchResult q_normal_lp_oracle(const FleetDecision& x, const Scenario& s,
                                  const Fleet& fleet, double lambda) {
    x.validate(fleet);
    ExtensiveFormInstance lp;
    const int n = fleet.size();
    std::vector<int> power_var(n);
    for (int i = 0; i < n; ++i) {
        const double cap = available_capacity(fleet, x, s, i);
        power_var[i] = lp.add_variable(VarKind::continuous, 0.0, cap,
                                       fleet.generators[i].op_cost_per_mw,
                                       "y" + std::to_string(i));
    }
    const int shed_var = lp.add_variable(
        VarKind::continuous, 0.0, std::numeric_limits<double>::infinity(), lambda, "r");
    const int demand_row = lp.add_row(RowSense::ge, s.demand, "dm");
    for (int i = 0; i < n; ++i) lp.add_entry(demand_row, power_var[i], 1.0);
    lp.add_entry(demand_row, shed_var, 1.0);

    const LpSolution sol = solve_lp(compile(lp));
    if (sol.status != LpStatus::optimal) {
        throw InternalError("q_normal_lp_oracle: dispatch LP did not solve");
    }
    DispatchResult result;
    result.power.assign(sol.x.begin(), sol.x.begin() + n);
    result.shed = sol.x[shed_var];
    result.cost = sol.objective;
    return result;
}

}  // namespace gridrisk
