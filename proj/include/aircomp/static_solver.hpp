#pragma once

#include "aircomp/types.hpp"

namespace aircomp {

/// Quantities behind the static threshold solution, all in sorted
/// (nondecreasing quality) order. J follows the sign identity
/// sign(q_k - eta_tilde_k) = sign(J_k), with J_1 = -sigma^2.
struct StaticDiagnostics {
    std::vector<double> quality;    // Pbar_k |h_k|^2, sorted
    std::vector<double> eta_tilde;  // per-prefix stationary points
    std::vector<double> J;
};

struct StaticSolution {
    std::vector<std::size_t> order;  // sorted rank -> original device index
    std::size_t k_star = 0;          // 1-based: devices 1..k_star (sorted) at full power
    double eta_star = 0.0;
    std::vector<double> powers;      // original device order
    double objective = 0.0;          // unscaled (P2) objective
    StaticDiagnostics diagnostics;
};

/// Stationary point of the k-th prefix objective,
/// ((sigma^2 + sum_{i<=k} Pbar_i|h_i|^2) / (sum_{i<=k} sqrt(Pbar_i)|h_i|))^2.
/// Devices must already be sorted by quality indicator; k is 1-based.
double eta_tilde(const SystemConfig& cfg, const ChannelVector& ch, std::size_t k);

/// Threshold solver: sorts by quality indicator, takes k* = argmin eta_tilde_k
/// (smallest k on ties), full power below the threshold and channel
/// inversion above. Rejects any |h_k| = 0.
StaticSolution solve_static(const SystemConfig& cfg, const ChannelVector& ch);

/// Interval-enumeration route: clamps each prefix stationary point into its
/// quality interval, evaluates all K candidates and keeps the minimizer.
/// Agrees with solve_static.
StaticSolution solve_static_by_enumeration(const SystemConfig& cfg, const ChannelVector& ch);

enum class SnrRegime { high_snr, low_snr };

/// Limiting policies: high SNR -> channel inversion at the smallest quality
/// indicator; low SNR -> full power with the K-prefix stationary point.
StaticSolution asymptotic_static(const SystemConfig& cfg, const ChannelVector& ch, SnrRegime regime);

namespace detail {
/// Prefix objective F_k(eta) over sorted devices (1-based k).
double static_prefix_objective(const std::vector<double>& sorted_amp, double sigma_sq,
                               std::size_t k, double eta);
}  // namespace detail

}  // namespace aircomp
