#pragma once

#include <span>

#include "aircomp/types.hpp"

namespace aircomp {

/// Truncated channel inversion with one fading-independent denoising factor.
struct TruncationPolicy {
    double eta = 0.0;
    std::vector<double> xi;              // per-device truncation threshold on |h_k|^2
    std::vector<double> inversion_prob;  // E[I_k]
};

struct LowComplexitySolution {
    TruncationPolicy policy;
    double objective = 0.0;  // K - sum_k E[I_k] + sigma^2/eta (unscaled MSE)
    MseReport mse;           // same value through the general evaluator
};

/// Largest truncation threshold set keeping the empirical inversion cost
/// E[I_k eta/|h_k|^2] within the budget (conservative side of the tightness
/// equality on a finite ensemble). A threshold above max|h_k|^2 (device
/// always silent) is a valid return.
double xi_for_eta(const FadingEnsemble& ens, std::size_t device, double eta, double budget);

/// Default search grid: 200 log-spaced candidates spanning
/// [1e-2 sigma^2, 1e4 max_k Pbar_k E|h_k|^2].
std::vector<double> default_eta_grid(const SystemConfig& cfg, const FadingEnsemble& ens);

/// Scan the eta grid, rebuild thresholds per candidate, keep the minimizer.
LowComplexitySolution solve_lowcomplexity(const SystemConfig& cfg, const FadingEnsemble& ens,
                                          std::span<const double> eta_grid = {});

/// Materialize the per-state powers/denoise of a truncation policy.
PowerPolicy realize_truncation_policy(const FadingEnsemble& ens, const TruncationPolicy& policy);

}  // namespace aircomp
