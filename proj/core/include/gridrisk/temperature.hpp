#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "gridrisk/bats.hpp"
#include "gridrisk/copula.hpp"

namespace gridrisk {

struct TemperatureField {
    int hour_of_day = 0;   // even hours 2,4,...,24
    int day_of_year = 0;   // 1..365
    std::vector<double> values;  // deg C per site
};

// Unconditional field: z ~ N(0, R_month(day)), then componentwise
// bats_quantile(Phi(z)). Deterministic given (inputs, seed); n is partitioned
// into fixed-size chunks with substream seeds (seed, chunk), so the output is
// identical for any job count.
std::vector<TemperatureField> sample_unconditional(
    const CopulaModel& model, const std::vector<BatsParams>& marginals,
    int hour_of_day, int day_of_year, int n, std::uint64_t seed, int jobs = 1);

enum class Tail { hot, cold };

struct ExtremeOptions {
    double q_spatial = 0.99;          // spatial-average quantile defining "extreme"
    double z_threshold_alpha = 0.975; // Gaussian-average truncation level
    int threshold_sample_count = 10000;
    std::uint64_t threshold_seed = 0x7e39a1c5u;  // stream for quantile estimation
    double min_acceptance = 0.01;
    int warmup_proposals = 512;
};

// Cache of estimated spatial-average temperature quantiles keyed by
// (hour, day, tail, q). Safe for concurrent use.
class SpatialQuantileCache {
public:
    bool lookup(int hour, int day, Tail tail, double q, double* out) const;
    void store(int hour, int day, Tail tail, double q, double value);

    struct Entry {
        int hour;
        int day;
        Tail tail;
        double q;
        double threshold;
    };
    std::vector<Entry> snapshot() const;

private:
    using Key = std::tuple<int, int, int, double>;
    mutable std::mutex mutex_;
    std::map<Key, double> cache_;
};

// Empirical q-quantile of the spatial-average temperature from n unconditional
// draws.
double estimate_spatial_average_quantile(const CopulaModel& model,
                                         const std::vector<BatsParams>& marginals,
                                         int hour_of_day, int day_of_year, double q,
                                         int n, std::uint64_t seed);

// Conditionally extreme fields: the Gaussian spatial average is drawn from its
// tail-truncated law, the remaining components from the closed-form
// conditional Gaussian, and candidates are accepted when the temperature-space
// spatial average lies beyond the q_spatial quantile (above for hot, below for
// cold). Throws ConfigError if the acceptance rate stays under
// options.min_acceptance after warmup.
std::vector<TemperatureField> sample_conditional_extreme(
    const CopulaModel& model, const std::vector<BatsParams>& marginals,
    int hour_of_day, int day_of_year, int n, Tail tail, const ExtremeOptions& options,
    std::uint64_t seed, SpatialQuantileCache* cache = nullptr, int jobs = 1);

}  // namespace gridrisk
