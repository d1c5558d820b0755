#pragma once

#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace aircomp {

/// Denoising factor sentinel: eta = infinity means the state is silent
/// (all transmit powers zero, per-device misalignment contribution 1).
inline constexpr double kSilentEta = std::numeric_limits<double>::infinity();

inline bool is_silent(double eta) { return std::isinf(eta); }

/// Thrown when a channel coefficient is zero where inversion is required.
struct degenerate_channel_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Thrown when a dual point makes the per-state Lagrangian infimum
/// unattained (some mu_k = 0 while the remaining prices cannot hold the
/// denoising factor finite).
struct degenerate_dual_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Devices, receiver noise and per-device average power budgets.
struct SystemConfig {
    std::size_t num_devices = 0;        // K
    double noise_var = 0.0;             // sigma^2 [W]
    std::vector<double> power_budgets;  // Pbar_k [W], one per device

    SystemConfig() = default;
    SystemConfig(std::size_t k, double sigma_sq, std::vector<double> budgets)
        : num_devices(k), noise_var(sigma_sq), power_budgets(std::move(budgets)) {
        if (num_devices < 1) throw std::invalid_argument("SystemConfig: K must be >= 1");
        if (!(noise_var > 0.0)) throw std::invalid_argument("SystemConfig: noise_var must be > 0");
        if (power_budgets.size() != num_devices)
            throw std::invalid_argument("SystemConfig: need one power budget per device");
        for (double p : power_budgets)
            if (!(p > 0.0)) throw std::invalid_argument("SystemConfig: power budgets must be > 0");
    }

    /// Expected receive SNR rho_k = Pbar_k / sigma^2.
    double receive_snr(std::size_t k) const { return power_budgets.at(k) / noise_var; }
};

/// One fading state: complex channel coefficients h_1..h_K.
/// Solvers consume only |h_k|^2; the phase is kept for signal-level work.
struct ChannelVector {
    std::vector<std::complex<double>> gains;

    ChannelVector() = default;
    explicit ChannelVector(std::vector<std::complex<double>> h) : gains(std::move(h)) {}

    /// Build from channel power gains |h_k|^2 (zero phases).
    static ChannelVector from_power_gains(const std::vector<double>& g) {
        std::vector<std::complex<double>> h;
        h.reserve(g.size());
        for (double v : g) {
            if (!(v >= 0.0)) throw std::invalid_argument("ChannelVector: |h|^2 must be >= 0");
            h.emplace_back(std::sqrt(v), 0.0);
        }
        return ChannelVector(std::move(h));
    }

    std::size_t size() const { return gains.size(); }
    double magnitude(std::size_t k) const { return std::abs(gains[k]); }
    double power_gain(std::size_t k) const { return std::norm(gains[k]); }
};

/// Transmit powers p_k(nu) and denoising factor eta(nu) over fading states.
/// eta(nu) = kSilentEta marks a silent state, where all powers are zero.
struct PowerPolicy {
    std::vector<std::vector<double>> powers;  // [state][device]
    std::vector<double> denoise;              // [state], in (0, inf]

    std::size_t num_states() const { return denoise.size(); }

    void validate(std::size_t num_devices) const {
        if (powers.size() != denoise.size())
            throw std::invalid_argument("PowerPolicy: powers/denoise state count mismatch");
        for (std::size_t i = 0; i < powers.size(); ++i) {
            if (powers[i].size() != num_devices)
                throw std::invalid_argument("PowerPolicy: wrong device count in state " + std::to_string(i));
            if (!(denoise[i] > 0.0))
                throw std::invalid_argument("PowerPolicy: eta must be positive (or inf)");
            for (double p : powers[i]) {
                if (!(p >= 0.0)) throw std::invalid_argument("PowerPolicy: negative power");
                if (is_silent(denoise[i]) && p != 0.0)
                    throw std::invalid_argument("PowerPolicy: silent state requires zero powers");
            }
        }
    }
};

/// Decomposed computation error. The solvers work with the unscaled
/// objective (the 1/K^2 factor of the instantaneous MSE dropped);
/// total_scaled restores it.
struct MseReport {
    double misalignment = 0.0;    // sum_k (sqrt(p_k)|h_k|/sqrt(eta) - 1)^2
    double noise_term = 0.0;      // sigma^2 / eta
    double total_unscaled = 0.0;  // misalignment + noise_term
    double total_scaled = 0.0;    // total_unscaled / K^2
};

/// Finite weighted set of fading states standing in for the channel
/// distribution; weights sum to one.
struct FadingEnsemble {
    std::vector<ChannelVector> states;
    std::vector<double> weights;

    std::size_t num_states() const { return states.size(); }
    std::size_t num_devices() const { return states.empty() ? 0 : states.front().size(); }
};

}  // namespace aircomp
