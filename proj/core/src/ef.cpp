#include "gridrisk/ef.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gridrisk/errors.hpp"
#include "gridrisk/mip.hpp"

namespace gridrisk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Availability coefficient of generator i in scenario k: MW for binary and
// existing units, MW-per-MW-installed for continuous ones.
double avail_coeff(const Fleet& fleet, const Scenario& s, int i) {
    return fleet.generators[i].capacity_profile.value(s.hour) * s.z[i];
}

std::string label(const char* prefix, int a) {
    return std::string(prefix) + std::to_string(a);
}

std::string label2(const char* prefix, int a, int b) {
    return std::string(prefix) + std::to_string(a) + "_" + std::to_string(b);
}

// First-stage variables with the FleetDecision map; returns the instance
// variable index per fleet position (-1 for existing units).
std::vector<int> add_first_stage(ExtensiveFormInstance& inst, const Fleet& fleet) {
    std::vector<int> var_of_gen(fleet.size(), -1);
    inst.meta.binary_slots = static_cast<int>(fleet.binary_indices.size());
    inst.meta.continuous_slots = static_cast<int>(fleet.continuous_indices.size());
    for (std::size_t slot = 0; slot < fleet.binary_indices.size(); ++slot) {
        const int g = fleet.binary_indices[slot];
        const auto& gen = fleet.generators[g];
        const int var = inst.add_variable(VarKind::binary, 0.0, 1.0,
                                          gen.capital_cost_per_period, label("x", g));
        var_of_gen[g] = var;
        inst.meta.first_stage.push_back(
            {var, g, static_cast<int>(slot), true, gen.id});
    }
    for (std::size_t slot = 0; slot < fleet.continuous_indices.size(); ++slot) {
        const int g = fleet.continuous_indices[slot];
        const auto& gen = fleet.generators[g];
        const int var = inst.add_variable(VarKind::continuous, 0.0, gen.capacity_upper_bound,
                                          gen.capital_cost_per_period, label("x", g));
        var_of_gen[g] = var;
        inst.meta.first_stage.push_back(
            {var, g, static_cast<int>(slot), false, gen.id});
    }
    return var_of_gen;
}

// Dispatch block for the cost sample: demand and capacity rows per scenario.
void add_operating_stage(ExtensiveFormInstance& inst, const Fleet& fleet,
                         const std::vector<Scenario>& n1, double lambda,
                         const std::vector<int>& var_of_gen) {
    const double weight = 1.0 / static_cast<double>(n1.size());
    for (int k = 0; k < static_cast<int>(n1.size()); ++k) {
        const Scenario& s = n1[k];
        std::vector<int> power(fleet.size());
        for (int g = 0; g < fleet.size(); ++g) {
            power[g] = inst.add_variable(VarKind::continuous, 0.0, kInf,
                                         weight * fleet.generators[g].op_cost_per_mw,
                                         label2("y", g, k));
        }
        const int shed =
            inst.add_variable(VarKind::continuous, 0.0, kInf, weight * lambda, label("r", k));
        const int demand_row = inst.add_row(RowSense::ge, s.demand, label("dm", k));
        for (int g = 0; g < fleet.size(); ++g) inst.add_entry(demand_row, power[g], 1.0);
        inst.add_entry(demand_row, shed, 1.0);
        for (int g = 0; g < fleet.size(); ++g) {
            const double coeff = avail_coeff(fleet, s, g);
            if (var_of_gen[g] >= 0) {
                const int row = inst.add_row(RowSense::le, 0.0, label2("cp", g, k));
                inst.add_entry(row, power[g], 1.0);
                if (coeff != 0.0) inst.add_entry(row, var_of_gen[g], -coeff);
            } else {
                const int row = inst.add_row(RowSense::le, coeff, label2("cp", g, k));
                inst.add_entry(row, power[g], 1.0);
            }
        }
    }
}

// Shortfall of scenario k as (constant, per-decision coefficients):
// shortfall = demand - existing availability - sum coeff_i x_i.
struct Shortfall {
    double rhs = 0.0;  // demand minus existing availability
    std::vector<std::pair<int, double>> terms;  // (fleet index, coefficient)
};

Shortfall shortfall_of(const Fleet& fleet, const Scenario& s,
                       const std::vector<int>& var_of_gen) {
    Shortfall sf;
    sf.rhs = s.demand;
    for (int g = 0; g < fleet.size(); ++g) {
        const double coeff = avail_coeff(fleet, s, g);
        if (coeff == 0.0) continue;
        if (var_of_gen[g] >= 0) {
            sf.terms.emplace_back(g, coeff);
        } else {
            sf.rhs -= coeff;
        }
    }
    return sf;
}

}  // namespace

ExtensiveFormInstance build_base(const Fleet& fleet, const std::vector<Scenario>& n1,
                                 double lambda) {
    if (n1.empty()) throw ArgumentError("build_base: need at least one scenario");
    ExtensiveFormInstance inst;
    inst.family = ModelFamily::base;
    inst.meta.lambda = lambda;
    const std::vector<int> var_of_gen = add_first_stage(inst, fleet);
    add_operating_stage(inst, fleet, n1, lambda, var_of_gen);
    return inst;
}

ExtensiveFormInstance build_biobj_cvar(const Fleet& fleet, const std::vector<Scenario>& n1,
                                       const std::vector<Scenario>& n2, double lambda,
                                       double alpha, double bound_u) {
    if (n1.empty() || n2.empty()) {
        throw ArgumentError("build_biobj_cvar: need scenarios for both objectives");
    }
    if (!(alpha >= 0.0 && alpha < 1.0)) {
        throw ArgumentError("build_biobj_cvar: alpha must lie in [0, 1)");
    }
    if (bound_u < 0.0) throw ArgumentError("build_biobj_cvar: bound_u must be nonnegative");
    ExtensiveFormInstance inst;
    inst.family = ModelFamily::biobj_cvar;
    inst.meta.lambda = lambda;
    inst.meta.alpha = alpha;
    inst.meta.bound_u = bound_u;
    const std::vector<int> var_of_gen = add_first_stage(inst, fleet);
    add_operating_stage(inst, fleet, n1, lambda, var_of_gen);
    if (std::isinf(bound_u)) return inst;  // risk budget is slack; same as base

    const int z = inst.add_variable(VarKind::continuous, -kInf, kInf, 0.0, "z");
    const int budget = inst.add_row(RowSense::le, bound_u, "cv");
    inst.add_entry(budget, z, 1.0);
    const double tail_weight =
        1.0 / ((1.0 - alpha) * static_cast<double>(n2.size()));
    for (int k = 0; k < static_cast<int>(n2.size()); ++k) {
        const int v = inst.add_variable(VarKind::continuous, 0.0, kInf, 0.0, label("v", k));
        inst.add_entry(budget, v, tail_weight);
        const Shortfall sf = shortfall_of(fleet, n2[k], var_of_gen);
        // v_k + z + sum coeff_i x_i >= demand - existing
        const int row = inst.add_row(RowSense::ge, sf.rhs, label("vb", k));
        inst.add_entry(row, v, 1.0);
        inst.add_entry(row, z, 1.0);
        for (const auto& [g, coeff] : sf.terms) inst.add_entry(row, var_of_gen[g], coeff);
    }
    return inst;
}

ExtensiveFormInstance build_biobj_lolp(const Fleet& fleet, const std::vector<Scenario>& n1,
                                       const std::vector<Scenario>& n2, double lambda,
                                       double bound_u) {
    if (n1.empty() || n2.empty()) {
        throw ArgumentError("build_biobj_lolp: need scenarios for both objectives");
    }
    if (!(bound_u >= 0.0 && bound_u <= 1.0)) {
        throw ArgumentError("build_biobj_lolp: bound_u must lie in [0, 1]");
    }
    ExtensiveFormInstance inst;
    inst.family = ModelFamily::biobj_lolp;
    inst.meta.lambda = lambda;
    inst.meta.bound_u = bound_u;
    const std::vector<int> var_of_gen = add_first_stage(inst, fleet);
    add_operating_stage(inst, fleet, n1, lambda, var_of_gen);

    BigMResult big_m = compute_big_m(fleet, n2, bound_u);
    inst.meta.big_m = big_m.values;
    for (auto& w : big_m.warnings) inst.meta.warnings.push_back(std::move(w));

    const long cap = static_cast<long>(
        std::floor(bound_u * static_cast<double>(n2.size()) + 1e-9));
    const int card = inst.add_row(RowSense::le, static_cast<double>(cap), "cd");
    for (int k = 0; k < static_cast<int>(n2.size()); ++k) {
        const int w = inst.add_variable(VarKind::binary, 0.0, 1.0, 0.0, label("w", k));
        inst.add_entry(card, w, 1.0);
        const Shortfall sf = shortfall_of(fleet, n2[k], var_of_gen);
        // M_k w_k + sum coeff_i x_i >= demand - existing
        const int row = inst.add_row(RowSense::ge, sf.rhs, label("bm", k));
        if (big_m.values[k] != 0.0) inst.add_entry(row, w, big_m.values[k]);
        for (const auto& [g, coeff] : sf.terms) inst.add_entry(row, var_of_gen[g], coeff);
    }
    return inst;
}

BigMResult compute_big_m(const Fleet& fleet, const std::vector<Scenario>& n2,
                         double bound_u) {
    if (n2.empty()) throw ArgumentError("compute_big_m: empty scenario sample");
    if (!(bound_u >= 0.0 && bound_u <= 1.0)) {
        throw ArgumentError("compute_big_m: bound_u must lie in [0, 1]");
    }
    const int n = static_cast<int>(n2.size());

    BigMResult result;
    // demand quantile the surviving scenarios must reach
    std::vector<double> demands(n);
    for (int k = 0; k < n; ++k) demands[k] = n2[k].demand;
    std::sort(demands.begin(), demands.end());
    const long idx =
        static_cast<long>(std::ceil((1.0 - bound_u) * static_cast<double>(n) - 1e-9));
    result.cover_level = idx >= 1 ? demands[std::min<long>(idx, n) - 1] : 0.0;

    // peak availability per generator across the sample
    std::vector<double> peak(fleet.size(), 0.0);
    for (int g = 0; g < fleet.size(); ++g) {
        for (int k = 0; k < n; ++k) {
            peak[g] = std::max(peak[g], avail_coeff(fleet, n2[k], g));
        }
    }
    double existing_peak = 0.0;
    double buildable_peak = 0.0;
    for (int g = 0; g < fleet.size(); ++g) {
        const auto& gen = fleet.generators[g];
        if (gen.kind == DecisionKind::existing_fixed) {
            existing_peak += peak[g];
        } else if (gen.kind == DecisionKind::binary_build) {
            buildable_peak += peak[g];
        } else {
            buildable_peak += peak[g] * gen.capacity_upper_bound;
        }
    }

    result.values.resize(n);
    const double cover_rhs = result.cover_level - existing_peak;
    const bool cover_unreachable = buildable_peak < cover_rhs - 1e-9;
    for (int k = 0; k < n; ++k) {
        const Scenario& s = n2[k];
        if (cover_unreachable) {
            result.values[k] = s.demand;
            continue;
        }
        // minimum availability in scenario k among fleets reaching the cover
        ExtensiveFormInstance cover;
        cover.family = ModelFamily::base;
        const int row = cover.add_row(RowSense::ge, cover_rhs, "cover");
        double existing_avail = 0.0;
        for (int g = 0; g < fleet.size(); ++g) {
            const auto& gen = fleet.generators[g];
            const double in_k = avail_coeff(fleet, s, g);
            if (gen.kind == DecisionKind::existing_fixed) {
                existing_avail += in_k;
                continue;
            }
            const bool binary = gen.kind == DecisionKind::binary_build;
            const int var = cover.add_variable(binary ? VarKind::binary : VarKind::continuous,
                                               0.0, binary ? 1.0 : gen.capacity_upper_bound,
                                               in_k, label("x", g));
            if (peak[g] != 0.0) cover.add_entry(row, var, peak[g]);
        }
        MipOptions opts;
        opts.gap_tol = 1e-9;
        const SolveResult sol = solve(cover, opts);
        if (sol.status != SolveStatus::optimal) {
            std::ostringstream msg;
            msg << "compute_big_m: covering problem unsolved for scenario " << k
                << "; falling back to M_k = D_k";
            result.warnings.push_back(msg.str());
            result.values[k] = s.demand;
            continue;
        }
        const double v_k = existing_avail + sol.objective;
        result.values[k] = std::max(s.demand - v_k, 0.0);
    }
    if (cover_unreachable) {
        result.warnings.push_back(
            "compute_big_m: fleet cannot reach the demand quantile even at full "
            "build; using M_k = D_k");
    }
    return result;
}

double base_objective(const Fleet& fleet, const std::vector<Scenario>& n1, double lambda,
                      const FleetDecision& x) {
    double capital = 0.0;
    for (std::size_t slot = 0; slot < fleet.binary_indices.size(); ++slot) {
        capital += x.build[slot] *
                   fleet.generators[fleet.binary_indices[slot]].capital_cost_per_period;
    }
    for (std::size_t slot = 0; slot < fleet.continuous_indices.size(); ++slot) {
        capital += x.capacity[slot] *
                   fleet.generators[fleet.continuous_indices[slot]].capital_cost_per_period;
    }
    double operating = 0.0;
    for (const Scenario& s : n1) operating += q_normal(x, s, fleet, lambda).cost;
    return capital + operating / static_cast<double>(n1.size());
}

}  // namespace gridrisk
