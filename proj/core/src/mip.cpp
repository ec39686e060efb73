#include "gridrisk/mip.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>

#include "gridrisk/errors.hpp"

namespace gridrisk {

const char* to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::infeasible: return "infeasible";
        case SolveStatus::gap_limit: return "gap_limit";
        case SolveStatus::time_limit: return "time_limit";
    }
    return "?";
}

namespace {

struct Node {
    double bound = -std::numeric_limits<double>::infinity();
    long id = 0;
    std::vector<std::pair<int, int>> fixes;  // (column, 0/1)
};

struct NodeOrder {
    bool operator()(const Node& a, const Node& b) const {
        if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
        return a.id > b.id;
    }
};

FleetDecision extract_first_stage(const InstanceMeta& meta, const std::vector<double>& x) {
    FleetDecision decision;
    decision.build.assign(meta.binary_slots, 0);
    decision.capacity.assign(meta.continuous_slots, 0.0);
    for (const auto& fs : meta.first_stage) {
        if (fs.binary) {
            decision.build[fs.slot] = static_cast<int>(std::lround(x[fs.var_index]));
        } else {
            decision.capacity[fs.slot] = x[fs.var_index];
        }
    }
    return decision;
}

}  // namespace

SolveResult solve(const ExtensiveFormInstance& instance, const MipOptions& options) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    const LpModel model = compile(instance);
    const std::vector<int>& binaries = model.binary_cols;

    SolveResult result;
    double incumbent = std::numeric_limits<double>::infinity();
    std::vector<double> incumbent_x;

    auto solve_node = [&](const std::vector<std::pair<int, int>>& fixes) {
        std::vector<double> lo = model.lower;
        std::vector<double> hi = model.upper;
        for (const auto& [col, val] : fixes) {
            lo[col] = val;
            hi[col] = val;
        }
        return solve_lp(model, lo, hi, options.lp);
    };

    // incumbent from fixing binaries to given values (kept inside their bounds)
    auto try_incumbent = [&](const std::vector<int>& values) {
        std::vector<std::pair<int, int>> fixes;
        fixes.reserve(binaries.size());
        for (std::size_t i = 0; i < binaries.size(); ++i) {
            const int col = binaries[i];
            const int clamped = std::clamp(values[i], static_cast<int>(model.lower[col]),
                                           static_cast<int>(model.upper[col]));
            fixes.emplace_back(col, clamped);
        }
        const LpSolution sol = solve_node(fixes);
        if (sol.status == LpStatus::optimal && sol.objective < incumbent - 1e-12) {
            incumbent = sol.objective;
            incumbent_x = sol.x;
            for (const auto& [col, val] : fixes) incumbent_x[col] = val;
        }
    };

    std::priority_queue<Node, std::vector<Node>, NodeOrder> queue;
    long next_id = 0;
    long nodes = 0;
    bool hit_time = false;
    bool hit_nodes = false;

    Node root;
    root.id = next_id++;
    {
        const LpSolution sol = solve_node({});
        if (sol.status == LpStatus::unbounded) {
            throw InternalError("solve: relaxation is unbounded");
        }
        if (sol.status == LpStatus::optimal) {
            root.bound = sol.objective;
            queue.push(root);
            if (!binaries.empty()) {
                // rounding heuristic, then the all-build fallback
                std::vector<int> rounded(binaries.size());
                for (std::size_t i = 0; i < binaries.size(); ++i) {
                    rounded[i] = sol.x[binaries[i]] >= 0.5 ? 1 : 0;
                }
                try_incumbent(rounded);
                std::vector<int> all_on(binaries.size(), 1);
                if (rounded != all_on) try_incumbent(all_on);
            }
        }
    }

    double best_bound = queue.empty() ? incumbent : queue.top().bound;
    while (!queue.empty()) {
        if (elapsed() > options.time_limit_s) {
            hit_time = true;
            break;
        }
        if (nodes >= options.node_limit) {
            hit_nodes = true;
            break;
        }
        Node node = queue.top();
        queue.pop();
        best_bound = node.bound;
        if (node.bound >= incumbent - 1e-12 ||
            (std::isfinite(incumbent) &&
             incumbent - node.bound <= options.gap_tol * std::max(1.0, std::abs(incumbent)))) {
            break;  // best-first: nothing left can improve beyond the gap
        }
        ++nodes;

        const LpSolution sol = solve_node(node.fixes);
        if (options.trace) options.trace(node.id, incumbent, node.bound);
        if (sol.status != LpStatus::optimal) continue;  // infeasible subtree
        if (sol.objective >= incumbent - 1e-12) continue;

        // most fractional binary, ties to the lowest index
        int branch_col = -1;
        double best_frac_dist = options.integrality_tol;
        for (int col : binaries) {
            const double v = sol.x[col];
            const double dist = std::abs(v - std::round(v));
            if (dist > best_frac_dist + 1e-15) {
                best_frac_dist = dist;
                branch_col = col;
            }
        }
        if (branch_col < 0) {
            // integral: refine by re-solving with binaries pinned
            std::vector<int> values(binaries.size());
            for (std::size_t i = 0; i < binaries.size(); ++i) {
                values[i] = static_cast<int>(std::lround(sol.x[binaries[i]]));
            }
            const double before = incumbent;
            try_incumbent(values);
            if (incumbent >= before && sol.objective < incumbent) {
                // pinned re-solve failed numerically; keep the node solution
                incumbent = sol.objective;
                incumbent_x = sol.x;
            }
            continue;
        }

        for (int v : {0, 1}) {
            Node child;
            child.bound = sol.objective;
            child.id = next_id++;
            child.fixes = node.fixes;
            child.fixes.emplace_back(branch_col, v);
            queue.push(child);
        }
    }

    if (!queue.empty() && !hit_time && !hit_nodes) {
        // terminated via the gap test; the queue top is the remaining bound
        best_bound = std::min(best_bound, queue.top().bound);
    }
    if (queue.empty() && std::isfinite(incumbent)) best_bound = incumbent;

    result.node_count = nodes;
    result.wall_time_s = elapsed();
    if (!std::isfinite(incumbent)) {
        result.status = hit_time ? SolveStatus::time_limit
                                 : (hit_nodes ? SolveStatus::gap_limit : SolveStatus::infeasible);
        return result;
    }
    result.objective = incumbent;
    result.x = incumbent_x;
    result.relative_gap =
        std::max(0.0, (incumbent - best_bound) / std::max(1.0, std::abs(incumbent)));
    if (hit_time) {
        result.status = SolveStatus::time_limit;
    } else if (hit_nodes) {
        result.status = SolveStatus::gap_limit;
    } else {
        result.status = result.relative_gap <= options.gap_tol ? SolveStatus::optimal
                                                               : SolveStatus::gap_limit;
    }
    if (!instance.meta.first_stage.empty()) {
        result.first_stage = extract_first_stage(instance.meta, result.x);
    }
    return result;
}

ExtensiveFormInstance fix_partial_fleet(
    ExtensiveFormInstance instance,
    const std::vector<std::pair<std::string, int>>& fixes) {
    for (const auto& [gen_id, value] : fixes) {
        if (value != 0 && value != 1) {
            throw ArgumentError("fix_partial_fleet: fixes must be 0 or 1");
        }
        int var = -1;
        for (const auto& fs : instance.meta.first_stage) {
            if (fs.binary && fs.gen_id == gen_id) {
                var = fs.var_index;
                break;
            }
        }
        if (var < 0) {
            throw ArgumentError("fix_partial_fleet: unknown or non-binary generator '" +
                                gen_id + "'");
        }
        VarRecord& rec = instance.variable(var);
        if (rec.lower == rec.upper && rec.lower != static_cast<double>(value)) {
            instance.meta.warnings.push_back("fix_partial_fleet: '" + gen_id +
                                             "' re-fixed; last value wins");
        }
        rec.lower = value;
        rec.upper = value;
    }
    return instance;
}

}  // namespace gridrisk
