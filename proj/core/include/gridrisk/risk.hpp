#pragma once

#include <vector>

namespace gridrisk {

// Discrete loss distribution: values with probabilities summing to one
// (uniform unless given).
struct LossSample {
    std::vector<double> values;
    std::vector<double> weights;  // empty means uniform

    static LossSample uniform(std::vector<double> values);
    void validate() const;
};

// Conditional value at risk at threshold alpha in [0, 1): the exact discrete
// infimum over gamma of gamma + E[(L - gamma)+] / (1 - alpha). The infimum is
// attained at a sample quantile, so it is computed by sorting.
double cvar(const LossSample& sample, double alpha);

// Mean of the ceil(n * alpha) largest values; the evaluation-phase estimator.
// Agrees with cvar exactly when n * alpha is an integer. Uniform weights only.
double cvar_tail_mean(const LossSample& sample, double alpha);

// Probability of a strictly positive loss.
double lolp(const LossSample& sample);

// Probability of a loss strictly above v; exceedance_prob(s, 0) == lolp(s).
double exceedance_prob(const LossSample& sample, double v);

}  // namespace gridrisk
