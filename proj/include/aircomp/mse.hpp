#pragma once

#include <cstdint>
#include <random>
#include <span>

#include "aircomp/types.hpp"

namespace aircomp {

/// One draw of the signal-level model: y = sum_k sqrt(p_k)|h_k| s_k + w.
struct SignalSample {
    std::vector<double> s;  // zero-mean unit-variance source symbols
    double w = 0.0;         // receiver noise, N(0, sigma^2)
    double y = 0.0;         // received superposition
    double f_hat = 0.0;     // recovered average y / (K sqrt(eta))
    double f = 0.0;         // true average (1/K) sum_k s_k
};

/// Instantaneous MSE of one fading state, decomposed into misalignment
/// and noise-induced parts. eta = kSilentEta requires all powers zero and
/// contributes exactly K (unscaled).
MseReport mse_single_state(const SystemConfig& cfg, const ChannelVector& ch,
                           std::span<const double> powers, double eta);

/// Ensemble-average MSE of a policy (weights of `ens` sum to one).
MseReport mse_ensemble(const SystemConfig& cfg, const FadingEnsemble& ens,
                       const PowerPolicy& policy);

struct OracleEstimate {
    double empirical_mse = 0.0;  // sample mean of (f_hat - f)^2, estimates total_scaled
    double std_error = 0.0;      // standard error of the mean
};

SignalSample draw_signal_sample(const SystemConfig& cfg, const ChannelVector& ch,
                                std::span<const double> powers, double eta,
                                std::mt19937_64& rng);

/// Monte Carlo estimate of the scaled MSE from i.i.d. standard-normal
/// sources and Gaussian receiver noise. Deterministic given the seed;
/// eta must be finite.
OracleEstimate mse_signal_oracle(const SystemConfig& cfg, const ChannelVector& ch,
                                 std::span<const double> powers, double eta,
                                 std::size_t num_draws, std::uint64_t seed);

}  // namespace aircomp
