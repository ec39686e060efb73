#pragma once

#include <string>
#include <vector>

namespace gridrisk {

// One structured configuration file drives every command; environment
// overrides sit between the file and command-line flags. Units are MW, MWh,
// USD, and deg C throughout.
struct RunConfig {
    struct Paths {
        std::string fleet;
        std::string demand_model;
        std::string marginals;
        std::string copula;
        std::string coords;      // site coordinates JSON for fit-copula
        std::string history;     // temperature history CSV for the fit commands
        std::string output_dir = "out";
    } paths;

    struct Experiment {
        std::string model_family = "biobj_cvar";
        int replications = 15;
        int n1 = 528;
        int n2 = 528;
        double alpha = 0.1;          // optimization-side cvar threshold
        double lambda = 0.0;         // shed price for the bi-objective families
        std::vector<double> sweep;   // lambda values for base, U values otherwise
        bool conditional = true;
        std::string tail = "auto";   // auto | hot | cold
        double q_spatial = 0.99;
        double z_threshold_alpha = 0.975;
        int threshold_samples = 10000;
        bool seasonal_fit = false;
        std::string wind_interp = "verbatim";  // verbatim | linear
        double wind_k = 0.1;
        std::vector<int> hours_of_day = {2, 4, 6, 8, 10, 12, 14, 16, 18, 20, 22, 24};
    } experiment;

    struct Solver {
        double gap_tol = 1e-4;
        double time_limit_s = 21600.0;
        long node_limit = 1000000;
    } solver;

    struct Evaluation {
        int n_cost = 5040;
        int n_risk = 25008;
        int n_risk_conditional = 2000;  // conditional sample for the monotone diagnostic
        std::string risk_measure = "cvar";  // cvar | lolp
        double cvar_alpha = 1e-4;
        double cutoff_risk = 15000.0;  // MWh (15 GWh)
    } evaluation;

    int jobs = 0;  // 0 means all logical cores

    // Loads the file and applies environment overrides (GRIDRISK_OUTPUT_DIR).
    static RunConfig load(const std::string& path);

    // Checks that referenced input files exist and sizes are positive.
    // Which paths are required depends on the command.
    void validate(bool needs_fleet, bool needs_demand, bool needs_marginals,
                  bool needs_copula, bool needs_history) const;

    // FNV-1a digest of the canonical serialized form; recorded in manifests.
    std::string hash() const;
};

}  // namespace gridrisk
