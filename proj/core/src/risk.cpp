#include "gridrisk/risk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gridrisk/errors.hpp"

namespace gridrisk {

LossSample LossSample::uniform(std::vector<double> values) {
    LossSample s;
    s.values = std::move(values);
    return s;
}

void LossSample::validate() const {
    if (values.empty()) throw ArgumentError("LossSample: empty sample");
    for (double v : values) {
        if (!std::isfinite(v)) throw ArgumentError("LossSample: non-finite value");
    }
    if (!weights.empty()) {
        if (weights.size() != values.size()) {
            throw ArgumentError("LossSample: weight count does not match value count");
        }
        double total = 0.0;
        for (double w : weights) {
            if (w < 0.0) throw ArgumentError("LossSample: negative weight");
            total += w;
        }
        if (std::abs(total - 1.0) > 1e-9) {
            throw ArgumentError("LossSample: weights must sum to 1");
        }
    }
}

namespace {

double weight_at(const LossSample& s, std::size_t i) {
    return s.weights.empty() ? 1.0 / static_cast<double>(s.values.size()) : s.weights[i];
}

}  // namespace

double cvar(const LossSample& sample, double alpha) {
    sample.validate();
    if (!(alpha >= 0.0 && alpha < 1.0)) {
        throw ArgumentError("cvar: alpha must lie in [0, 1)");
    }
    const std::size_t n = sample.values.size();

    if (sample.weights.empty()) {
        // uniform case: the infimum is attained at the ceil(t)-th largest
        // value where t = n (1 - alpha); when t is an integer the result is
        // the plain mean of the top t values
        std::vector<double> sorted = sample.values;
        std::sort(sorted.begin(), sorted.end(), std::greater<>());
        const double t = static_cast<double>(n) * (1.0 - alpha);
        const double rounded = std::round(t);
        if (rounded >= 1.0 && std::abs(t - rounded) < 1e-9) {
            const std::size_t m = static_cast<std::size_t>(rounded);
            double total = 0.0;
            for (std::size_t i = 0; i < m; ++i) total += sorted[i];
            return total / static_cast<double>(m);
        }
        const std::size_t k = std::min<std::size_t>(
            n, static_cast<std::size_t>(std::max(1.0, std::ceil(t - 1e-9))));
        const double gamma = sorted[k - 1];
        double excess = 0.0;
        for (std::size_t i = 0; i + 1 < k; ++i) excess += sorted[i] - gamma;
        return gamma + excess / t;
    }

    // weighted case: walk down from the largest value until the tail holds
    // mass 1 - alpha; that value attains the infimum
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return sample.values[a] > sample.values[b];
    });
    const double tail = 1.0 - alpha;
    double acc = 0.0;
    double gamma = sample.values[order.back()];
    std::size_t stop = n;
    for (std::size_t r = 0; r < n; ++r) {
        acc += weight_at(sample, order[r]);
        if (acc >= tail - 1e-12) {
            gamma = sample.values[order[r]];
            stop = r;
            break;
        }
    }
    double excess = 0.0;
    for (std::size_t r = 0; r < stop; ++r) {
        excess += weight_at(sample, order[r]) * (sample.values[order[r]] - gamma);
    }
    return gamma + excess / tail;
}

double cvar_tail_mean(const LossSample& sample, double alpha) {
    sample.validate();
    if (!sample.weights.empty()) {
        throw ArgumentError("cvar_tail_mean: uniform weights required");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ArgumentError("cvar_tail_mean: alpha must lie in (0, 1)");
    }
    const std::size_t n = sample.values.size();
    const std::size_t k = static_cast<std::size_t>(
        std::ceil(alpha * static_cast<double>(n) - 1e-9));
    const std::size_t count = std::max<std::size_t>(1, std::min(k, n));
    std::vector<double> sorted = sample.values;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double total = 0.0;
    for (std::size_t i = 0; i < count; ++i) total += sorted[i];
    return total / static_cast<double>(count);
}

double lolp(const LossSample& sample) {
    return exceedance_prob(sample, 0.0);
}

double exceedance_prob(const LossSample& sample, double v) {
    sample.validate();
    double p = 0.0;
    for (std::size_t i = 0; i < sample.values.size(); ++i) {
        if (sample.values[i] > v) p += weight_at(sample, i);
    }
    return p;
}

}  // namespace gridrisk
