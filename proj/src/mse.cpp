#include "aircomp/mse.hpp"

#include <cmath>

namespace aircomp {

static void check_state_args(const SystemConfig& cfg, const ChannelVector& ch,
                             std::span<const double> powers) {
    if (ch.size() != cfg.num_devices)
        throw std::invalid_argument("mse: channel vector has wrong device count");
    if (powers.size() != cfg.num_devices)
        throw std::invalid_argument("mse: power vector has wrong device count");
    for (double p : powers)
        if (!(p >= 0.0)) throw std::invalid_argument("mse: negative power");
}

MseReport mse_single_state(const SystemConfig& cfg, const ChannelVector& ch,
                           std::span<const double> powers, double eta) {
    check_state_args(cfg, ch, powers);
    if (!(eta > 0.0)) throw std::invalid_argument("mse: eta must be positive (or inf)");

    const std::size_t k_count = cfg.num_devices;
    MseReport r;
    if (is_silent(eta)) {
        for (double p : powers)
            if (p != 0.0) throw std::invalid_argument("mse: silent state requires zero powers");
        r.misalignment = static_cast<double>(k_count);
        r.noise_term = 0.0;
    } else {
        const double inv_sqrt_eta = 1.0 / std::sqrt(eta);
        double mis = 0.0;
        for (std::size_t k = 0; k < k_count; ++k) {
            const double d = std::sqrt(powers[k]) * ch.magnitude(k) * inv_sqrt_eta - 1.0;
            mis += d * d;
        }
        r.misalignment = mis;
        r.noise_term = cfg.noise_var / eta;
    }
    r.total_unscaled = r.misalignment + r.noise_term;
    r.total_scaled = r.total_unscaled / (static_cast<double>(k_count) * static_cast<double>(k_count));
    return r;
}

MseReport mse_ensemble(const SystemConfig& cfg, const FadingEnsemble& ens,
                       const PowerPolicy& policy) {
    if (policy.num_states() != ens.num_states())
        throw std::invalid_argument("mse_ensemble: policy/ensemble state count mismatch");
    MseReport acc;
    for (std::size_t i = 0; i < ens.num_states(); ++i) {
        const MseReport r = mse_single_state(cfg, ens.states[i], policy.powers[i], policy.denoise[i]);
        acc.misalignment += ens.weights[i] * r.misalignment;
        acc.noise_term += ens.weights[i] * r.noise_term;
    }
    acc.total_unscaled = acc.misalignment + acc.noise_term;
    acc.total_scaled =
        acc.total_unscaled / (static_cast<double>(cfg.num_devices) * static_cast<double>(cfg.num_devices));
    return acc;
}

SignalSample draw_signal_sample(const SystemConfig& cfg, const ChannelVector& ch,
                                std::span<const double> powers, double eta,
                                std::mt19937_64& rng) {
    std::normal_distribution<double> unit(0.0, 1.0);
    const std::size_t k_count = cfg.num_devices;
    SignalSample smp;
    smp.s.resize(k_count);
    double y = 0.0, f = 0.0;
    for (std::size_t k = 0; k < k_count; ++k) {
        smp.s[k] = unit(rng);
        y += std::sqrt(powers[k]) * ch.magnitude(k) * smp.s[k];
        f += smp.s[k];
    }
    smp.w = std::sqrt(cfg.noise_var) * unit(rng);
    smp.y = y + smp.w;
    smp.f = f / static_cast<double>(k_count);
    smp.f_hat = smp.y / (static_cast<double>(k_count) * std::sqrt(eta));
    return smp;
}

OracleEstimate mse_signal_oracle(const SystemConfig& cfg, const ChannelVector& ch,
                                 std::span<const double> powers, double eta,
                                 std::size_t num_draws, std::uint64_t seed) {
    check_state_args(cfg, ch, powers);
    if (is_silent(eta))
        throw std::invalid_argument("mse_signal_oracle: eta must be finite");
    if (!(eta > 0.0)) throw std::invalid_argument("mse_signal_oracle: eta must be positive");
    if (num_draws < 100) throw std::invalid_argument("mse_signal_oracle: need at least 100 draws");

    std::mt19937_64 rng(seed);
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < num_draws; ++i) {
        const SignalSample smp = draw_signal_sample(cfg, ch, powers, eta, rng);
        const double e = smp.f_hat - smp.f;
        const double se = e * e;
        sum += se;
        sum_sq += se * se;
    }
    const double n = static_cast<double>(num_draws);
    OracleEstimate out;
    out.empirical_mse = sum / n;
    const double var = (sum_sq - sum * sum / n) / (n - 1.0);
    out.std_error = std::sqrt(var > 0.0 ? var / n : 0.0);
    return out;
}

}  // namespace aircomp
