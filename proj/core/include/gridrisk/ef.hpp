#pragma once

#include <vector>

#include "gridrisk/dispatch.hpp"
#include "gridrisk/lp.hpp"

namespace gridrisk {

// Extensive forms over scenario samples. Variable labels: x<g> first stage,
// y<g>_<k> power, r<k> shed, z the value-at-risk level, v<k> tail excess,
// w<k> shed indicators. Row labels: dm<k> demand, cp<g>_<k> capacity, cv the
// risk budget, vb<k> tail rows, bm<k> indicator rows, cd the cardinality row.

// min c'x + (1/|N|) sum_k (sum_i u_i y_ik + lambda r_k)
ExtensiveFormInstance build_base(const Fleet& fleet, const std::vector<Scenario>& n1,
                                 double lambda);

// Base objective on n1 plus a tail-risk budget on n2: a free level z, excesses
// v_k >= shortfall_k - z, and z + sum_k v_k / ((1-alpha) |n2|) <= bound_u.
// An infinite bound_u omits the risk block and reduces to build_base on n1.
ExtensiveFormInstance build_biobj_cvar(const Fleet& fleet, const std::vector<Scenario>& n1,
                                       const std::vector<Scenario>& n2, double lambda,
                                       double alpha, double bound_u);

// Base objective on n1 plus a shed-probability budget on n2: binary w_k with
// M_k w_k >= shortfall_k and sum_k w_k <= floor(|n2| bound_u).
ExtensiveFormInstance build_biobj_lolp(const Fleet& fleet, const std::vector<Scenario>& n1,
                                       const std::vector<Scenario>& n2, double lambda,
                                       double bound_u);

struct BigMResult {
    std::vector<double> values;          // one per scenario in n2
    double cover_level = 0.0;            // demand quantile the fleet must reach
    std::vector<std::string> warnings;   // covering infeasibility fallbacks
};

// Per-scenario big-M constants: the worst-case unserved demand among fleets
// whose maximal availability covers the (1 - bound_u) demand quantile,
// M_k = max(D_k - V_k, 0). Falls back to M_k = D_k when the cover is
// unreachable.
BigMResult compute_big_m(const Fleet& fleet, const std::vector<Scenario>& n2,
                         double bound_u);

// Objective value of a fixed first-stage decision under the base family
// (capital plus mean dispatch cost); used for enumeration cross-checks.
double base_objective(const Fleet& fleet, const std::vector<Scenario>& n1, double lambda,
                      const FleetDecision& x);

}  // namespace gridrisk
