#include "gridrisk/simplex.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "gridrisk/errors.hpp"

namespace gridrisk {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

const char* to_string(LpStatus status) {
    switch (status) {
        case LpStatus::optimal: return "optimal";
        case LpStatus::infeasible: return "infeasible";
        case LpStatus::unbounded: return "unbounded";
        case LpStatus::iteration_limit: return "iteration_limit";
    }
    return "?";
}

LpModel compile(const ExtensiveFormInstance& instance) {
    LpModel m;
    m.n_structural = instance.variable_count();
    m.n_rows = instance.row_count();
    m.cost.resize(m.n_structural);
    m.lower.resize(m.n_structural);
    m.upper.resize(m.n_structural);
    for (int j = 0; j < m.n_structural; ++j) {
        const auto& v = instance.variable(j);
        m.cost[j] = v.objective;
        m.lower[j] = v.lower;
        m.upper[j] = v.upper;
        if (v.kind == VarKind::binary) m.binary_cols.push_back(j);
    }
    m.sense.reserve(m.n_rows);
    m.rhs.reserve(m.n_rows);
    for (const auto& r : instance.rows()) {
        m.sense.push_back(r.sense);
        m.rhs.push_back(r.rhs);
    }

    std::vector<MatrixEntry> entries = instance.entries();
    std::sort(entries.begin(), entries.end(), [](const MatrixEntry& a, const MatrixEntry& b) {
        return a.col != b.col ? a.col < b.col : a.row < b.row;
    });
    m.col_start.assign(m.n_structural + 1, 0);
    for (const auto& e : entries) ++m.col_start[e.col + 1];
    for (int j = 0; j < m.n_structural; ++j) m.col_start[j + 1] += m.col_start[j];
    m.row_index.resize(entries.size());
    m.value.resize(entries.size());
    for (std::size_t k = 0; k < entries.size(); ++k) {
        m.row_index[k] = entries[k].row;
        m.value[k] = entries[k].coeff;
    }
    return m;
}

namespace {

enum class NbState : unsigned char { basic, at_lower, at_upper, nb_free };

// Product-form update of the basis inverse.
struct Eta {
    int pivot_pos;
    Eigen::VectorXd w;
};

class Simplex {
public:
    Simplex(const LpModel& model, const std::vector<double>& lower,
            const std::vector<double>& upper, const SimplexOptions& options)
        : model_(model), options_(options) {
        n_ = model.n_structural;
        m_ = model.n_rows;
        total_ = n_ + 2 * m_;  // structural + slack + artificial
        lower_.resize(total_);
        upper_.resize(total_);
        cost_.assign(total_, 0.0);
        for (int j = 0; j < n_; ++j) {
            lower_[j] = lower[j];
            upper_[j] = upper[j];
        }
        for (int i = 0; i < m_; ++i) {
            const int s = n_ + i;
            switch (model.sense[i]) {
                case RowSense::le: lower_[s] = 0.0; upper_[s] = kInf; break;
                case RowSense::ge: lower_[s] = -kInf; upper_[s] = 0.0; break;
                case RowSense::eq: lower_[s] = 0.0; upper_[s] = 0.0; break;
            }
        }
        art_sign_.assign(m_, 1.0);
        state_.assign(total_, NbState::at_lower);
        value_.assign(total_, 0.0);
        basis_.resize(m_);
        basis_pos_.assign(total_, -1);
    }

    LpSolution run() {
        LpSolution sol;
        initialize();

        // phase 1: drive artificial infeasibility to zero
        for (int i = 0; i < m_; ++i) cost_[n_ + m_ + i] = 1.0;
        const LpStatus phase1 = iterate(true);
        if (phase1 == LpStatus::iteration_limit) {
            sol.status = LpStatus::iteration_limit;
            sol.iterations = iterations_;
            return sol;
        }
        double art_total = 0.0;
        for (int i = 0; i < m_; ++i) art_total += value_[n_ + m_ + i];
        if (art_total > options_.feas_tol * (1.0 + rhs_scale_)) {
            sol.status = LpStatus::infeasible;
            sol.iterations = iterations_;
            return sol;
        }

        // phase 2: artificials pinned to zero, real objective
        for (int i = 0; i < m_; ++i) {
            const int a = n_ + m_ + i;
            cost_[a] = 0.0;
            lower_[a] = 0.0;
            upper_[a] = 0.0;
            value_[a] = std::abs(value_[a]) < options_.feas_tol ? 0.0 : value_[a];
        }
        for (int j = 0; j < n_; ++j) cost_[j] = model_.cost[j];
        const LpStatus phase2 = iterate(false);

        sol.status = phase2;
        sol.iterations = iterations_;
        sol.x.assign(value_.begin(), value_.begin() + n_);
        sol.objective = 0.0;
        for (int j = 0; j < n_; ++j) sol.objective += model_.cost[j] * value_[j];
        if (phase2 == LpStatus::optimal) {
            finalize_certificates(sol);
        }
        return sol;
    }

private:
    // ---- column access ----

    template <typename Fn>
    void for_column(int j, Fn&& fn) const {
        if (j < n_) {
            for (int k = model_.col_start[j]; k < model_.col_start[j + 1]; ++k) {
                fn(model_.row_index[k], model_.value[k]);
            }
        } else if (j < n_ + m_) {
            fn(j - n_, 1.0);
        } else {
            fn(j - n_ - m_, art_sign_[j - n_ - m_]);
        }
    }

    double column_dot(int j, const Eigen::VectorXd& y) const {
        double acc = 0.0;
        for_column(j, [&](int row, double v) { acc += v * y(row); });
        return acc;
    }

    // ---- factorization ----

    void refactorize() {
        Eigen::SparseMatrix<double> b(m_, m_);
        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(static_cast<std::size_t>(m_) * 4);
        for (int pos = 0; pos < m_; ++pos) {
            for_column(basis_[pos], [&](int row, double v) {
                trips.emplace_back(row, pos, v);
            });
        }
        b.setFromTriplets(trips.begin(), trips.end());
        lu_.compute(b);
        if (lu_.info() != Eigen::Success) {
            dump_basis();
            throw InternalError("simplex: singular basis (dump written to '" +
                                dump_path_ + "')");
        }
        etas_.clear();
        recompute_basic_values();
    }

    void dump_basis() {
        dump_path_ = options_.dump_dir.empty() ? "simplex_basis_dump.txt"
                                               : options_.dump_dir + "/simplex_basis_dump.txt";
        std::ofstream out(dump_path_);
        out << "basis columns (position, column index)\n";
        for (int pos = 0; pos < m_; ++pos) out << pos << ' ' << basis_[pos] << '\n';
    }

    Eigen::VectorXd ftran(Eigen::VectorXd v) {
        Eigen::VectorXd x = lu_.solve(v);
        for (const Eta& e : etas_) {
            const double piv = x(e.pivot_pos) / e.w(e.pivot_pos);
            x -= e.w * piv;
            x(e.pivot_pos) = piv;
        }
        return x;
    }

    Eigen::VectorXd btran(Eigen::VectorXd c) {
        for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
            const double dot = it->w.dot(c);
            c(it->pivot_pos) -= (dot - c(it->pivot_pos)) / it->w(it->pivot_pos);
        }
        return lu_.adjoint().solve(c);
    }

    void recompute_basic_values() {
        Eigen::VectorXd r(m_);
        for (int i = 0; i < m_; ++i) r(i) = model_.rhs[i];
        for (int j = 0; j < total_; ++j) {
            if (state_[j] == NbState::basic) continue;
            if (value_[j] == 0.0) continue;
            for_column(j, [&](int row, double v) { r(row) -= v * value_[j]; });
        }
        const Eigen::VectorXd xb = ftran(r);
        for (int pos = 0; pos < m_; ++pos) value_[basis_[pos]] = xb(pos);
    }

    // ---- setup ----

    void initialize() {
        rhs_scale_ = 0.0;
        for (double b : model_.rhs) rhs_scale_ = std::max(rhs_scale_, std::abs(b));

        for (int j = 0; j < n_ + m_; ++j) {
            if (std::isinf(lower_[j]) && std::isinf(upper_[j])) {
                state_[j] = NbState::nb_free;
                value_[j] = 0.0;
            } else if (std::isinf(lower_[j])) {
                state_[j] = NbState::at_upper;
                value_[j] = upper_[j];
            } else {
                state_[j] = NbState::at_lower;
                value_[j] = lower_[j];
            }
        }
        // residuals decide the artificial signs; artificials form the basis
        std::vector<double> resid(model_.rhs);
        for (int j = 0; j < n_ + m_; ++j) {
            if (value_[j] == 0.0) continue;
            for_column(j, [&](int row, double v) { resid[row] -= v * value_[j]; });
        }
        for (int i = 0; i < m_; ++i) {
            const int a = n_ + m_ + i;
            art_sign_[i] = resid[i] >= 0.0 ? 1.0 : -1.0;
            lower_[a] = 0.0;
            upper_[a] = kInf;
            value_[a] = std::abs(resid[i]);
            state_[a] = NbState::basic;
            basis_[i] = a;
            basis_pos_[a] = i;
        }
        iterations_ = 0;
        degenerate_pivots_ = 0;
        bland_ = false;
        refactorize();
    }

    // ---- main loop ----

    LpStatus iterate(bool phase1) {
        const long bland_threshold = 10L * (m_ + total_);
        while (iterations_ < options_.max_iterations) {
            Eigen::VectorXd cb(m_);
            for (int pos = 0; pos < m_; ++pos) cb(pos) = cost_[basis_[pos]];
            const Eigen::VectorXd y = btran(cb);

            // pricing
            int entering = -1;
            double best_violation = options_.rc_tol;
            bool increase = true;
            for (int j = 0; j < total_; ++j) {
                const NbState st = state_[j];
                if (st == NbState::basic) continue;
                if (lower_[j] == upper_[j] && st != NbState::nb_free) continue;
                const double rc = cost_[j] - column_dot(j, y);
                double violation = 0.0;
                bool dir_up = true;
                if (st == NbState::at_lower) {
                    violation = -rc;
                    dir_up = true;
                } else if (st == NbState::at_upper) {
                    violation = rc;
                    dir_up = false;
                } else {  // free at value
                    violation = std::abs(rc);
                    dir_up = rc < 0.0;
                }
                if (violation > best_violation) {
                    best_violation = violation;
                    entering = j;
                    increase = dir_up;
                    if (bland_) break;  // first eligible index
                }
            }
            if (entering < 0) return LpStatus::optimal;

            // direction through the basis
            Eigen::VectorXd a_col = Eigen::VectorXd::Zero(m_);
            for_column(entering, [&](int row, double v) { a_col(row) += v; });
            const Eigen::VectorXd w = ftran(a_col);
            const double dir = increase ? 1.0 : -1.0;

            // ratio test
            double best_t = kInf;
            int leaving_pos = -1;
            bool leaving_to_lower = true;
            for (int pos = 0; pos < m_; ++pos) {
                const double wi = w(pos);
                if (std::abs(wi) <= options_.pivot_tol) continue;
                const int bj = basis_[pos];
                const double delta = dir * wi;  // x_B[pos] decreases at this rate
                double limit;
                bool to_lower;
                if (delta > 0.0) {
                    if (std::isinf(lower_[bj])) continue;
                    limit = (value_[bj] - lower_[bj]) / delta;
                    to_lower = true;
                } else {
                    if (std::isinf(upper_[bj])) continue;
                    limit = (value_[bj] - upper_[bj]) / delta;
                    to_lower = false;
                }
                limit = std::max(limit, 0.0);
                const bool better =
                    limit < best_t - 1e-12 ||
                    (limit < best_t + 1e-12 && leaving_pos >= 0 &&
                     (bland_ ? basis_[pos] < basis_[leaving_pos]
                             : std::abs(wi) > std::abs(w(leaving_pos))));
                if (better) {
                    best_t = limit;
                    leaving_pos = pos;
                    leaving_to_lower = to_lower;
                }
            }

            const double range = upper_[entering] - lower_[entering];
            const bool flip = range < best_t;
            const double step = flip ? range : best_t;
            if (std::isinf(step)) {
                return phase1 ? LpStatus::infeasible : LpStatus::unbounded;
            }

            // apply the step
            if (step != 0.0) {
                for (int pos = 0; pos < m_; ++pos) {
                    if (w(pos) != 0.0) value_[basis_[pos]] -= dir * step * w(pos);
                }
            }
            value_[entering] += dir * step;
            ++iterations_;
            if (step < 1e-11) {
                if (++degenerate_pivots_ > bland_threshold) bland_ = true;
            }

            if (flip) {
                state_[entering] =
                    increase ? NbState::at_upper : NbState::at_lower;
                value_[entering] = increase ? upper_[entering] : lower_[entering];
                continue;
            }

            // basis change
            const int leaving = basis_[leaving_pos];
            state_[leaving] = leaving_to_lower ? NbState::at_lower : NbState::at_upper;
            value_[leaving] = leaving_to_lower ? lower_[leaving] : upper_[leaving];
            basis_pos_[leaving] = -1;
            basis_[leaving_pos] = entering;
            basis_pos_[entering] = leaving_pos;
            state_[entering] = NbState::basic;
            etas_.push_back({leaving_pos, w});
            if (static_cast<int>(etas_.size()) >= options_.refactor_interval) {
                refactorize();
            }
        }
        return LpStatus::iteration_limit;
    }

    void finalize_certificates(LpSolution& sol) {
        Eigen::VectorXd cb(m_);
        for (int pos = 0; pos < m_; ++pos) cb(pos) = cost_[basis_[pos]];
        const Eigen::VectorXd y = btran(cb);
        sol.duals.assign(y.data(), y.data() + m_);

        double dual_violation = 0.0;
        for (int j = 0; j < total_; ++j) {
            if (state_[j] == NbState::basic || lower_[j] == upper_[j]) continue;
            const double rc = cost_[j] - column_dot(j, y);
            if (state_[j] == NbState::at_lower) {
                dual_violation = std::max(dual_violation, -rc);
            } else if (state_[j] == NbState::at_upper) {
                dual_violation = std::max(dual_violation, rc);
            } else {
                dual_violation = std::max(dual_violation, std::abs(rc));
            }
        }
        sol.max_dual_violation = dual_violation;

        double primal_violation = 0.0;
        std::vector<double> activity(m_, 0.0);
        for (int j = 0; j < n_; ++j) {
            if (value_[j] == 0.0) continue;
            for_column(j, [&](int row, double v) { activity[row] += v * value_[j]; });
            primal_violation = std::max(primal_violation, lower_[j] - value_[j]);
            primal_violation = std::max(primal_violation, value_[j] - upper_[j]);
        }
        for (int i = 0; i < m_; ++i) {
            const double gap = activity[i] - model_.rhs[i];
            switch (model_.sense[i]) {
                case RowSense::le: primal_violation = std::max(primal_violation, gap); break;
                case RowSense::ge: primal_violation = std::max(primal_violation, -gap); break;
                case RowSense::eq: primal_violation = std::max(primal_violation, std::abs(gap)); break;
            }
        }
        sol.max_primal_violation = std::max(primal_violation, 0.0);
    }

    const LpModel& model_;
    const SimplexOptions& options_;
    int n_ = 0, m_ = 0, total_ = 0;
    std::vector<double> lower_, upper_, cost_, value_;
    std::vector<double> art_sign_;
    std::vector<NbState> state_;
    std::vector<int> basis_, basis_pos_;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
    std::vector<Eta> etas_;
    long iterations_ = 0;
    long degenerate_pivots_ = 0;
    bool bland_ = false;
    double rhs_scale_ = 0.0;
    std::string dump_path_;
};

}  // namespace

LpSolution solve_lp(const LpModel& model, const std::vector<double>& lower,
                    const std::vector<double>& upper, const SimplexOptions& options) {
    if (static_cast<int>(lower.size()) != model.n_structural ||
        static_cast<int>(upper.size()) != model.n_structural) {
        throw ArgumentError("solve_lp: bound overrides have the wrong length");
    }
    Simplex simplex(model, lower, upper, options);
    return simplex.run();
}

LpSolution solve_lp(const LpModel& model, const SimplexOptions& options) {
    return solve_lp(model, model.lower, model.upper, options);
}

}  // namespace gridrisk
