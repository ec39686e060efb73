#include "gridrisk/prop1.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gridrisk/errors.hpp"

namespace gridrisk {

namespace {

// Pool-adjacent-violators on (x, y) pairs already sorted by x with ties in x
// pre-averaged. Returns the fitted value per pair.
std::vector<double> pava(const std::vector<double>& y, const std::vector<double>& w) {
    const std::size_t n = y.size();
    std::vector<double> level_value;
    std::vector<double> level_weight;
    std::vector<std::size_t> level_count;
    for (std::size_t i = 0; i < n; ++i) {
        level_value.push_back(y[i]);
        level_weight.push_back(w[i]);
        level_count.push_back(1);
        while (level_value.size() > 1 &&
               level_value[level_value.size() - 2] > level_value.back()) {
            const double wsum = level_weight[level_weight.size() - 2] + level_weight.back();
            const double merged = (level_value[level_value.size() - 2] *
                                       level_weight[level_weight.size() - 2] +
                                   level_value.back() * level_weight.back()) /
                                  wsum;
            level_count[level_count.size() - 2] += level_count.back();
            level_value[level_value.size() - 2] = merged;
            level_weight[level_weight.size() - 2] = wsum;
            level_value.pop_back();
            level_weight.pop_back();
            level_count.pop_back();
        }
    }
    std::vector<double> fitted;
    fitted.reserve(n);
    for (std::size_t b = 0; b < level_value.size(); ++b) {
        for (std::size_t k = 0; k < level_count[b]; ++k) fitted.push_back(level_value[b]);
    }
    return fitted;
}

std::vector<int> pareto_set(const std::vector<double>& f, const std::vector<double>& g) {
    const int n = static_cast<int>(f.size());
    std::vector<int> members;
    for (int i = 0; i < n; ++i) {
        bool dominated = false;
        for (int j = 0; j < n && !dominated; ++j) {
            if (j == i) continue;
            dominated = f[j] <= f[i] && g[j] <= g[i] && (f[j] < f[i] || g[j] < g[i]);
        }
        if (!dominated) members.push_back(i);
    }
    return members;
}

}  // namespace

Prop1Report check_prop1(const Prop1Input& input, HFamily family,
                        std::optional<std::pair<double, double>> certificate) {
    const std::size_t n = input.f.size();
    if (n == 0 || input.g.size() != n || input.g_hat.size() != n) {
        throw ArgumentError("check_prop1: f, g, g_hat must be non-empty and equal length");
    }

    Prop1Report report;

    // sort by g; average g_hat over exact ties in g so h is a function of g
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return input.g[a] < input.g[b]; });
    std::vector<double> gx, gy, gw;
    std::vector<std::vector<int>> knot_members;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        double sum = 0.0;
        std::vector<int> members;
        while (j < n && input.g[order[j]] == input.g[order[i]]) {
            sum += input.g_hat[order[j]];
            members.push_back(order[j]);
            ++j;
        }
        gx.push_back(input.g[order[i]]);
        gy.push_back(sum / static_cast<double>(j - i));
        gw.push_back(static_cast<double>(j - i));
        knot_members.push_back(std::move(members));
        i = j;
    }

    // fit h within the family
    std::vector<double> fitted_at_knots;
    double fit_L = 0.0;
    if (family == HFamily::isotonic) {
        fitted_at_knots = pava(gy, gw);
        fit_L = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i + 1 < gx.size(); ++i) {
            const double slope =
                (fitted_at_knots[i + 1] - fitted_at_knots[i]) / (gx[i + 1] - gx[i]);
            fit_L = std::min(fit_L, slope);
        }
        if (gx.size() < 2) fit_L = 0.0;
    } else {
        // least-squares line
        double mx = 0.0, my = 0.0, wsum = 0.0;
        for (std::size_t i = 0; i < gx.size(); ++i) {
            mx += gw[i] * gx[i];
            my += gw[i] * gy[i];
            wsum += gw[i];
        }
        mx /= wsum;
        my /= wsum;
        double sxx = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < gx.size(); ++i) {
            sxx += gw[i] * (gx[i] - mx) * (gx[i] - mx);
            sxy += gw[i] * (gx[i] - mx) * (gy[i] - my);
        }
        const double a = sxx > 0.0 ? sxy / sxx : 0.0;
        const double b = my - a * mx;
        fit_L = a;
        fitted_at_knots.resize(gx.size());
        for (std::size_t i = 0; i < gx.size(); ++i) fitted_at_knots[i] = a * gx[i] + b;
    }

    // residual sup over all points and the scatter table
    double fit_epsilon = 0.0;
    report.scatter.reserve(n);
    double ss_res = 0.0, ss_tot = 0.0;
    {
        double mean_ghat = 0.0;
        for (double v : input.g_hat) mean_ghat += v;
        mean_ghat /= static_cast<double>(n);
        for (std::size_t knot = 0; knot < gx.size(); ++knot) {
            for (int idx : knot_members[knot]) {
                const double resid = input.g_hat[idx] - fitted_at_knots[knot];
                fit_epsilon = std::max(fit_epsilon, std::abs(resid));
                ss_res += resid * resid;
                ss_tot += (input.g_hat[idx] - mean_ghat) * (input.g_hat[idx] - mean_ghat);
                report.scatter.push_back({gx[knot], input.g_hat[idx], fitted_at_knots[knot]});
            }
        }
    }
    report.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);

    if (certificate.has_value()) {
        report.epsilon = certificate->first;
        report.L = certificate->second;
    } else {
        report.epsilon = fit_epsilon;
        report.L = std::max(fit_L, 0.0);
    }

    report.pareto_true = pareto_set(input.f, input.g);
    report.pareto_approx = pareto_set(input.f, input.g_hat);

    if (!(report.L > 0.0)) {
        report.L = 0.0;
        report.applicable = false;  // no monotone certificate; conclusions not applicable
        return report;
    }
    report.applicable = true;
    const double bound = 2.0 * report.epsilon / report.L;

    // (a) every approximate Pareto point is 2e/L Pareto optimal for (f, g)
    for (int i : report.pareto_approx) {
        for (std::size_t j = 0; j < n; ++j) {
            if (static_cast<int>(j) == i) continue;
            if (input.f[j] <= input.f[i] && input.g[j] < input.g[i] - bound) {
                report.violations_a.push_back(i);
                break;
            }
        }
    }
    // (b) every true Pareto point is nearly dominated by an approximate one
    for (int i : report.pareto_true) {
        bool covered = false;
        for (int j : report.pareto_approx) {
            if (input.f[j] <= input.f[i] && input.g[j] <= input.g[i] + bound) {
                covered = true;
                break;
            }
        }
        if (!covered) report.violations_b.push_back(i);
    }
    return report;
}

}  // namespace gridrisk
