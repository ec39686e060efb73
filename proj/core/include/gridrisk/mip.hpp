#pragma once

#include <functional>
#include <limits>

#include "gridrisk/dispatch.hpp"
#include "gridrisk/simplex.hpp"

namespace gridrisk {

enum class SolveStatus { optimal, infeasible, gap_limit, time_limit };

const char* to_string(SolveStatus status);

struct MipOptions {
    double gap_tol = 1e-4;  // relative optimality gap at termination
    double integrality_tol = 1e-6;
    double time_limit_s = 3600.0;
    long node_limit = 1000000;
    SimplexOptions lp;
    // optional per-node hook (node id, incumbent objective, global bound)
    std::function<void(long, double, double)> trace;
};

struct SolveResult {
    SolveStatus status = SolveStatus::infeasible;
    double objective = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> x;       // full variable vector of the incumbent
    FleetDecision first_stage;   // populated when the instance carries a map
    double relative_gap = std::numeric_limits<double>::infinity();
    long node_count = 0;
    double wall_time_s = 0.0;
};

// Best-first branch and bound over the binary variables with bounded-variable
// primal simplex relaxations; branches on the most fractional binary, ties to
// the lowest index. Node selection ties break on node id, so runs are
// deterministic.
SolveResult solve(const ExtensiveFormInstance& instance, const MipOptions& options = {});

// Tightens the bounds of first-stage binary variables to fixed values.
// Unknown generator ids raise ArgumentError; conflicting fixes resolve to the
// last one given and are recorded in the instance warnings.
ExtensiveFormInstance fix_partial_fleet(ExtensiveFormInstance instance,
                                        const std::vector<std::pair<std::string, int>>& fixes);

}  // namespace gridrisk
