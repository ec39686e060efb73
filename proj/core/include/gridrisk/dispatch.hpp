#pragma once

#include <vector>

#include "gridrisk/fleet.hpp"
#include "gridrisk/scenario.hpp"

namespace gridrisk {

// First-stage fleet choice: build flags aligned with Fleet::binary_indices,
// installed MW aligned with Fleet::continuous_indices.
struct FleetDecision {
    std::vector<int> build;
    std::vector<double> capacity;

    static FleetDecision none(const Fleet& fleet);
    static FleetDecision all(const Fleet& fleet);  // every binary on, bounds for continuous
    void validate(const Fleet& fleet) const;
};

struct DispatchResult {
    std::vector<double> power;  // MW per generator, fleet order
    double shed = 0.0;          // MW
    double cost = 0.0;          // $ for the period
};

// Available capacity of one generator under a decision and scenario (MW).
double available_capacity(const Fleet& fleet, const FleetDecision& x,
                          const Scenario& s, int gen_index);

// Least-cost dispatch with load shed priced at lambda. Costs are linear, so
// the optimum is merit order: fill demand from the cheapest available blocks,
// shedding once every block cheaper than lambda is used. Ties in marginal
// cost break by generator id ascending.
DispatchResult q_normal(const FleetDecision& x, const Scenario& s, const Fleet& fleet,
                        double lambda);

// Minimum load shed: (D - total available capacity)+.
double q_extreme(const FleetDecision& x, const Scenario& s, const Fleet& fleet);

// Reference implementation of q_normal through the LP solver; used by tests
// and cross-checks only.
DispatchResult q_normal_lp_oracle(const FleetDecision& x, const Scenario& s,
                                  const Fleet& fleet, double lambda);

}  // namespace gridrisk
