#include "aircomp/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "aircomp/mse.hpp"
#include "aircomp/static_solver.hpp"

namespace aircomp {

PowerPolicy full_power_static(const SystemConfig& cfg, const ChannelVector& ch) {
    const StaticSolution asym = asymptotic_static(cfg, ch, SnrRegime::low_snr);
    PowerPolicy policy;
    policy.powers.push_back(cfg.power_budgets);
    policy.denoise.push_back(asym.eta_star);
    return policy;
}

PowerPolicy uniform_power_fading(const SystemConfig& cfg, const FadingEnsemble& ens) {
    if (ens.num_devices() != cfg.num_devices)
        throw std::invalid_argument("uniform_power_fading: device count mismatch");
    double eta = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < cfg.num_devices; ++k) {
        double mean_quality = 0.0;
        for (std::size_t i = 0; i < ens.num_states(); ++i)
            mean_quality += ens.weights[i] * cfg.power_budgets[k] * ens.states[i].power_gain(k);
        eta = std::min(eta, mean_quality);
    }
    if (!(eta > 0.0))
        throw degenerate_channel_error("uniform_power_fading: a device has zero mean quality");
    PowerPolicy policy;
    policy.powers.assign(ens.num_states(), cfg.power_budgets);
    policy.denoise.assign(ens.num_states(), eta);
    return policy;
}

namespace {

void inversion_state(const SystemConfig& cfg, const ChannelVector& ch, double cutoff,
                     std::vector<double>& p_out, double& eta_out) {
    const std::size_t k_count = cfg.num_devices;
    double eta = std::numeric_limits<double>::infinity();
    bool any = false;
    for (std::size_t k = 0; k < k_count; ++k) {
        const double g = ch.power_gain(k);
        if (g >= cutoff && g > 0.0) {
            eta = std::min(eta, cfg.power_budgets[k] * g);
            any = true;
        }
    }
    p_out.assign(k_count, 0.0);
    if (!any) {
        eta_out = kSilentEta;
        return;
    }
    for (std::size_t k = 0; k < k_count; ++k) {
        const double g = ch.power_gain(k);
        if (g >= cutoff && g > 0.0) p_out[k] = eta / g;
    }
    eta_out = eta;
}

}  // namespace

PowerPolicy traditional_inversion(const SystemConfig& cfg, const ChannelVector& ch, double cutoff) {
    if (!(cutoff >= 0.0)) throw std::invalid_argument("traditional_inversion: cutoff must be >= 0");
    if (ch.size() != cfg.num_devices)
        throw std::invalid_argument("traditional_inversion: device count mismatch");
    PowerPolicy policy;
    policy.powers.resize(1);
    policy.denoise.resize(1);
    inversion_state(cfg, ch, cutoff, policy.powers[0], policy.denoise[0]);
    return policy;
}

PowerPolicy traditional_inversion(const SystemConfig& cfg, const FadingEnsemble& ens, double cutoff) {
    if (!(cutoff >= 0.0)) throw std::invalid_argument("traditional_inversion: cutoff must be >= 0");
    if (ens.num_devices() != cfg.num_devices)
        throw std::invalid_argument("traditional_inversion: device count mismatch");
    PowerPolicy policy;
    policy.powers.resize(ens.num_states());
    policy.denoise.resize(ens.num_states());
    for (std::size_t i = 0; i < ens.num_states(); ++i)
        inversion_state(cfg, ens.states[i], cutoff, policy.powers[i], policy.denoise[i]);
    return policy;
}

CutoffChoice best_inversion_cutoff(const SystemConfig& cfg, const ChannelVector& ch) {
    std::vector<double> candidates{0.0};
    for (std::size_t k = 0; k < ch.size(); ++k) candidates.push_back(ch.power_gain(k));
    std::sort(candidates.begin(), candidates.end());
    FadingEnsemble one;
    one.states.push_back(ch);
    one.weights.push_back(1.0);
    CutoffChoice best{0.0, std::numeric_limits<double>::infinity()};
    for (double c : candidates) {
        const PowerPolicy policy = traditional_inversion(cfg, ch, c);
        const double v = mse_ensemble(cfg, one, policy).total_unscaled;
        if (v < best.mse_unscaled) best = {c, v};
    }
    return best;
}

CutoffChoice best_inversion_cutoff(const SystemConfig& cfg, const FadingEnsemble& ens,
                                   std::size_t grid_size) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& st : ens.states)
        for (std::size_t k = 0; k < st.size(); ++k) {
            const double g = st.power_gain(k);
            if (g > 0.0) {
                lo = std::min(lo, g);
                hi = std::max(hi, g);
            }
        }
    std::vector<double> candidates{0.0};
    if (hi > 0.0 && grid_size > 1) {
        const double step = std::log(hi / lo) / static_cast<double>(grid_size - 1);
        for (std::size_t i = 0; i < grid_size; ++i)
            candidates.push_back(lo * std::exp(step * static_cast<double>(i)));
    }
    CutoffChoice best{0.0, std::numeric_limits<double>::infinity()};
    for (double c : candidates) {
        const PowerPolicy policy = traditional_inversion(cfg, ens, c);
        const double v = mse_ensemble(cfg, ens, policy).total_unscaled;
        if (v < best.mse_unscaled) best = {c, v};
    }
    return best;
}

}  // namespace aircomp
