#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

namespace gridrisk {

// Joint spatial dependence of the transformed temperature field: a Gaussian
// copula with exponential correlation exp(-dist/gamma_m), one length scale per
// calendar month. Immutable after construction and safe to share across
// threads.
struct CopulaModel {
    std::vector<std::array<double, 2>> site_coords;
    std::array<double, 12> gamma_by_month{};  // month 1..12 at index m-1
    std::string coord_units = "km";
    std::vector<Eigen::MatrixXd> cholesky_cache;  // lower factors, one per month

    int site_count() const { return static_cast<int>(site_coords.size()); }
    const Eigen::MatrixXd& cholesky(int month) const;
    Eigen::MatrixXd correlation(int month) const;

    // Builds the Cholesky cache; throws ConditioningError when any monthly
    // correlation matrix fails to factor.
    static CopulaModel build(std::vector<std::array<double, 2>> coords,
                             const std::array<double, 12>& gammas,
                             std::string coord_units = "km");
};

Eigen::MatrixXd exponential_correlation(
    const std::vector<std::array<double, 2>>& coords, double gamma);

struct CopulaFitOptions {
    int min_fields_per_month = 30;
    double default_gamma = 1.0;  // used when a single site makes gamma vacuous
    int search_evaluations = 60;
};

struct CopulaFitResult {
    CopulaModel model;
    std::array<double, 12> loglik{};
    bool single_site = false;  // correlation was vacuous; default gamma used
};

// Per-month maximum-likelihood length scales from standard-normal transformed
// fields, found by a golden-section search on log(gamma) over a positive
// bracket derived from the pairwise site distances.
CopulaFitResult fit_copula_lengthscale(
    const std::array<std::vector<Eigen::VectorXd>, 12>& z_fields_by_month,
    const std::vector<std::array<double, 2>>& coords,
    const CopulaFitOptions& options = {});

}  // namespace gridrisk
