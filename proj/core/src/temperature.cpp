#include "gridrisk/temperature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gridrisk/calendar.hpp"
#include "gridrisk/errors.hpp"
#include "gridrisk/math.hpp"
#include "gridrisk/parallel.hpp"
#include "gridrisk/rng.hpp"

namespace gridrisk {

namespace {

constexpr int kChunk = 256;  // fixed partition size keeps output independent of jobs

void check_inputs(const CopulaModel& model, const std::vector<BatsParams>& marginals,
                  int hour_of_day, int day_of_year, int n) {
    if (model.site_count() == 0) throw ArgumentError("sampler: empty copula model");
    if (static_cast<int>(marginals.size()) != model.site_count()) {
        throw ArgumentError("sampler: marginal count does not match copula site count");
    }
    if (day_of_year < 1 || day_of_year > 365) {
        throw ArgumentError("sampler: day_of_year must lie in 1..365");
    }
    if (hour_of_day < 1 || hour_of_day > 24) {
        throw ArgumentError("sampler: hour_of_day must lie in 1..24");
    }
    if (n < 1) throw ArgumentError("sampler: n must be at least 1");
}

double clamp_open_unit(double u) {
    constexpr double lo = 1e-300;
    const double hi = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
    return std::clamp(u, lo, hi);
}

TemperatureField map_to_temperature(const Eigen::VectorXd& z,
                                    const std::vector<BatsParams>& marginals,
                                    int hour_of_day, int day_of_year) {
    TemperatureField field;
    field.hour_of_day = hour_of_day;
    field.day_of_year = day_of_year;
    field.values.resize(z.size());
    for (int l = 0; l < z.size(); ++l) {
        const double u = clamp_open_unit(math::normal_cdf(z(l)));
        field.values[l] = bats_quantile(u, marginals[l], day_of_year);
    }
    return field;
}

}  // namespace

std::vector<TemperatureField> sample_unconditional(
    const CopulaModel& model, const std::vector<BatsParams>& marginals,
    int hour_of_day, int day_of_year, int n, std::uint64_t seed, int jobs) {
    check_inputs(model, marginals, hour_of_day, day_of_year, n);
    const int month = month_of_day(day_of_year);
    const Eigen::MatrixXd& chol = model.cholesky(month);
    const int sites = model.site_count();

    std::vector<TemperatureField> out(n);
    const std::size_t chunks = (static_cast<std::size_t>(n) + kChunk - 1) / kChunk;
    parallel_for(chunks, jobs, [&](std::size_t chunk) {
        Rng rng(substream(seed, SeedSpace::scenario, chunk));
        const int begin = static_cast<int>(chunk) * kChunk;
        const int end = std::min(n, begin + kChunk);
        Eigen::VectorXd eps(sites);
        for (int k = begin; k < end; ++k) {
            for (int l = 0; l < sites; ++l) eps(l) = rng.normal();
            const Eigen::VectorXd z = chol * eps;
            out[k] = map_to_temperature(z, marginals, hour_of_day, day_of_year);
        }
    });
    return out;
}

bool SpatialQuantileCache::lookup(int hour, int day, Tail tail, double q,
                                  double* out) const {
    std::lock_guard<std::mutex> lock(mutex_);
    const auto it = cache_.find({hour, day, static_cast<int>(tail), q});
    if (it == cache_.end()) return false;
    *out = it->second;
    return true;
}

void SpatialQuantileCache::store(int hour, int day, Tail tail, double q, double value) {
    std::lock_guard<std::mutex> lock(mutex_);
    cache_[{hour, day, static_cast<int>(tail), q}] = value;
}

std::vector<SpatialQuantileCache::Entry> SpatialQuantileCache::snapshot() const {
    std::lock_guard<std::mutex> lock(mutex_);
    std::vector<Entry> out;
    out.reserve(cache_.size());
    for (const auto& [key, value] : cache_) {
        out.push_back({std::get<0>(key), std::get<1>(key),
                       static_cast<Tail>(std::get<2>(key)), std::get<3>(key), value});
    }
    return out;
}

double estimate_spatial_average_quantile(const CopulaModel& model,
                                         const std::vector<BatsParams>& marginals,
                                         int hour_of_day, int day_of_year, double q,
                                         int n, std::uint64_t seed) {
    if (!(q > 0.0 && q < 1.0)) {
        throw ArgumentError("estimate_spatial_average_quantile: q must lie in (0,1)");
    }
    const auto fields = sample_unconditional(model, marginals, hour_of_day, day_of_year,
                                             n, substream(seed, SeedSpace::threshold));
    std::vector<double> means(fields.size());
    for (std::size_t i = 0; i < fields.size(); ++i) {
        double s = 0.0;
        for (double v : fields[i].values) s += v;
        means[i] = s / static_cast<double>(fields[i].values.size());
    }
    std::sort(means.begin(), means.end());
    const std::size_t idx = std::min<std::size_t>(
        means.size() - 1,
        static_cast<std::size_t>(std::max(1.0, std::ceil(q * means.size()))) - 1);
    return means[idx];
}

std::vector<TemperatureField> sample_conditional_extreme(
    const CopulaModel& model, const std::vector<BatsParams>& marginals,
    int hour_of_day, int day_of_year, int n, Tail tail, const ExtremeOptions& options,
    std::uint64_t seed, SpatialQuantileCache* cache, int jobs) {
    check_inputs(model, marginals, hour_of_day, day_of_year, n);
    if (!(options.q_spatial > 0.5 && options.q_spatial < 1.0)) {
        throw ArgumentError("sample_conditional_extreme: q_spatial must lie in (0.5, 1)");
    }
    if (!(options.z_threshold_alpha > 0.0 && options.z_threshold_alpha < options.q_spatial)) {
        throw ArgumentError(
            "sample_conditional_extreme: z_threshold_alpha must lie in (0, q_spatial)");
    }

    // spatial-average temperature quantile that defines the extreme event
    const double q_target = tail == Tail::hot ? options.q_spatial : 1.0 - options.q_spatial;
    double temp_threshold = 0.0;
    if (cache == nullptr ||
        !cache->lookup(hour_of_day, day_of_year, tail, options.q_spatial, &temp_threshold)) {
        temp_threshold = estimate_spatial_average_quantile(
            model, marginals, hour_of_day, day_of_year, q_target,
            options.threshold_sample_count, options.threshold_seed);
        if (cache != nullptr) {
            cache->store(hour_of_day, day_of_year, tail, options.q_spatial, temp_threshold);
        }
    }

    const int month = month_of_day(day_of_year);
    const Eigen::MatrixXd& chol = model.cholesky(month);
    const int sites = model.site_count();
    const Eigen::MatrixXd corr = chol * chol.transpose();
    const Eigen::VectorXd a = Eigen::VectorXd::Constant(sites, 1.0 / sites);
    const Eigen::VectorXd w = corr * a;          // Cov(z, z_a)
    const double s2 = a.dot(w);                   // Var(z_a)
    const double s = std::sqrt(s2);
    const double alpha = options.z_threshold_alpha;

    std::vector<TemperatureField> out(n);
    const std::size_t chunks = (static_cast<std::size_t>(n) + kChunk - 1) / kChunk;
    parallel_for(chunks, jobs, [&](std::size_t chunk) {
        Rng rng(substream(seed, SeedSpace::scenario, chunk, 1));
        const int begin = static_cast<int>(chunk) * kChunk;
        const int end = std::min(n, begin + kChunk);
        Eigen::VectorXd eps(sites);
        long proposals = 0;
        long accepted = 0;
        for (int k = begin; k < end;) {
            ++proposals;
            // truncated draw of the Gaussian spatial average
            const double u = rng.uniform01();
            double z_a = s * math::normal_quantile(clamp_open_unit(alpha + u * (1.0 - alpha)));
            if (tail == Tail::cold) z_a = -z_a;
            // conditional law of z given its average: mean w*z_a/s2, cov R - w w^T/s2
            for (int l = 0; l < sites; ++l) eps(l) = rng.normal();
            const Eigen::VectorXd y = chol * eps;
            const Eigen::VectorXd z = y + w * ((z_a - a.dot(y)) / s2);
            TemperatureField field = map_to_temperature(z, marginals, hour_of_day, day_of_year);
            double mean_t = 0.0;
            for (double v : field.values) mean_t += v;
            mean_t /= sites;
            const bool accept =
                tail == Tail::hot ? mean_t >= temp_threshold : mean_t <= temp_threshold;
            if (accept) {
                out[k] = std::move(field);
                ++k;
                ++accepted;
            }
            if (proposals >= options.warmup_proposals &&
                static_cast<double>(accepted) < options.min_acceptance * proposals) {
                std::ostringstream msg;
                msg << "sample_conditional_extreme: acceptance rate "
                    << static_cast<double>(accepted) / proposals << " after " << proposals
                    << " proposals; lower z_threshold_alpha (currently " << alpha << ")";
                throw ConfigError(msg.str());
            }
        }
    });
    return out;
}

}  // namespace gridrisk
