#pragma once

#include <span>

#include "aircomp/types.hpp"

namespace aircomp {

/// Per-state inner solution: gamma = 1/eta, with gamma = 0 marking the
/// silent state (eta = inf).
struct InnerSolveResult {
    double gamma = 0.0;
    double eta = kSilentEta;
};

/// Root of sum_k lambda_k/(lambda_k gamma + 1)^2 = sigma^2 over
/// lambda_k = |h_k|^2 / mu_k (lambda infinite at mu_k = 0). Returns the
/// silence sentinel when the all-finite sum never reaches sigma^2.
InnerSolveResult inner_gamma_solve(const ChannelVector& ch, std::span<const double> mu,
                                   double sigma_sq);

/// Regularized channel inversion p_k = (sqrt(|h_k|^2 eta)/(|h_k|^2 + eta mu_k))^2.
/// mu_k = 0 reduces to exact inversion; eta = inf gives zero power.
std::vector<double> inner_power(const ChannelVector& ch, std::span<const double> mu, double eta);

struct DualEvalResult {
    double dual_value = 0.0;
    std::vector<double> subgradient;  // E[p_k] - Pbar_k
    PowerPolicy policy;
};

/// Lagrange dual function value, subgradient and per-state minimizers at a
/// given price vector. States are evaluated independently.
DualEvalResult dual_eval(const SystemConfig& cfg, const FadingEnsemble& ens,
                         std::span<const double> mu, std::size_t threads = 0);

enum class OuterMethod { automatic, ellipsoid, subgradient };

struct OuterOptions {
    double tol = 1e-6;          // relative dual suboptimality target
    std::size_t max_iter = 0;   // 0 -> 500 K^2 (ellipsoid) / 400 (subgradient)
    double mu_max = 1e6;
    OuterMethod method = OuterMethod::automatic;
    int polish = -1;            // -1 auto (on for K <= 12), 0 off, 1 on
    std::size_t threads = 0;    // 0 -> hardware concurrency
    bool record_trace = false;
};

/// Outer iteration snapshot (one per dual evaluation when tracing).
struct DualState {
    std::vector<double> mu;
    std::vector<double> ellipsoid_center;
    std::vector<double> ellipsoid_shape;  // row-major K x K (empty for non-ellipsoid methods)
    std::size_t iteration = 0;
    double best_dual = 0.0;
};

struct FadingSolution {
    PowerPolicy policy;
    std::vector<double> mu_opt;
    double dual_value = 0.0;
    double primal_value = 0.0;  // unscaled ensemble MSE of the returned policy
    double gap = 0.0;           // primal - dual
    std::vector<double> constraint_residuals;  // E[p_k] - Pbar_k after restoration
    bool converged = false;
    bool rescaled = false;  // feasibility restoration kicked in beyond tol
    std::size_t iterations = 0;
    std::vector<DualState> trace;
};

/// Dual ascent for the ensemble power-control problem: ellipsoid cuts for
/// small K, log-domain projected subgradient beyond, per-coordinate polish,
/// then primal recovery with per-device feasibility restoration.
FadingSolution outer_solve(const SystemConfig& cfg, const FadingEnsemble& ens,
                           const OuterOptions& opts = {});

}  // namespace aircomp
