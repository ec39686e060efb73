#pragma once

#include <string>
#include <vector>

#include "gridrisk/lp.hpp"

namespace gridrisk {

// Computational form of an LP: structural columns in CSC order plus row
// senses. Binary markers are ignored here; bounds carry the relaxation.
struct LpModel {
    int n_structural = 0;
    int n_rows = 0;
    std::vector<double> cost;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<int> col_start;   // size n_structural + 1
    std::vector<int> row_index;   // nnz
    std::vector<double> value;    // nnz
    std::vector<RowSense> sense;
    std::vector<double> rhs;
    std::vector<int> binary_cols;  // structural indices flagged binary
};

LpModel compile(const ExtensiveFormInstance& instance);

struct SimplexOptions {
    double pivot_tol = 1e-8;
    double rc_tol = 1e-7;
    double feas_tol = 1e-8;
    long max_iterations = 2000000;
    int refactor_interval = 64;
    std::string dump_dir;  // where a basis dump lands if the basis goes singular
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

const char* to_string(LpStatus status);

struct LpSolution {
    LpStatus status = LpStatus::iteration_limit;
    double objective = 0.0;
    std::vector<double> x;      // structural values
    std::vector<double> duals;  // one multiplier per row
    long iterations = 0;
    double max_primal_violation = 0.0;
    double max_dual_violation = 0.0;
};

// Two-phase bounded-variable primal simplex. Dantzig pricing with a Bland
// fallback after 10 (rows + cols) degenerate pivots.
LpSolution solve_lp(const LpModel& model, const SimplexOptions& options = {});

// Same, with replacement structural bounds (used by branch and bound).
LpSolution solve_lp(const LpModel& model, const std::vector<double>& lower,
                    const std::vector<double>& upper, const SimplexOptions& options = {});

}  // namespace gridrisk
