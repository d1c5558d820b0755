#pragma once

#include <cstdint>
#include <string>

#include "aircomp/types.hpp"

namespace aircomp {

/// One experiment family from a config file; flags override file values.
struct ExperimentConfig {
    std::string experiment;  // static_demo | static_sweep_K | static_sweep_snr |
                             // fading_sweep_K | fading_sweep_snr |
                             // waterfilling_profile | lowcomplexity_compare
    std::vector<std::size_t> k_list;
    std::vector<double> snr_db_list;
    std::string snr_profile = "uniform";  // or heterogeneous
    std::size_t ensemble_size = 5000;     // N
    std::size_t replicates = 5;
    std::uint64_t seed = 1;
    double sigma_h_sq = 1.0;
    std::string out_dir = ".";
    std::string method = "subgradient";  // fading outer method: auto|ellipsoid|subgradient
    bool plots = false;
    bool quick = false;
    std::size_t threads = 0;
};

/// Fill in per-experiment defaults for fields the user left empty, validate,
/// and apply quick-mode reductions.
ExperimentConfig finalize_config(ExperimentConfig cfg);

ExperimentConfig load_config_json(const std::string& path);

/// Receive-SNR parameterization: uniform keeps Pbar = 1 W and sets
/// sigma^2 = 10^(-rho/10); heterogeneous fixes sigma^2 = 1 and derives the
/// budgets from the repeating 5-device SNR pattern shifted to the requested
/// average.
SystemConfig make_system_config(std::size_t num_devices, double snr_db,
                                const std::string& snr_profile);

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c);

/// Aggregated measurements of one scheme at one sweep point.
struct SchemeStats {
    std::string scheme;
    double mse_scaled_mean = 0.0;
    double mse_scaled_stderr = 0.0;
    double mse_unscaled_mean = 0.0;
    double gap_mean = 0.0;  // optimal scheme only
    bool warning = false;   // solver convergence warning on some replicate
    std::vector<double> per_replicate_scaled;
};

struct SweepResult {
    std::string x_name;  // "K" or "snr_db"
    std::vector<double> x;
    std::vector<std::vector<SchemeStats>> points;  // [x][scheme]
};

SweepResult run_static_sweep(const ExperimentConfig& cfg, bool sweep_k);
SweepResult run_fading_sweep(const ExperimentConfig& cfg, bool sweep_k);

/// Run the configured experiment and write its CSV (and SVG) artifacts.
/// Returns 0 on success.
int run_experiment(const ExperimentConfig& cfg);

}  // namespace aircomp
