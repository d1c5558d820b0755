#pragma once

#include "aircomp/types.hpp"

namespace aircomp {

/// Full power with the all-devices stationary denoising factor (single state).
PowerPolicy full_power_static(const SystemConfig& cfg, const ChannelVector& ch);

/// p_k(nu) = Pbar_k everywhere; one denoising factor
/// eta = min_k E[Pbar_k |h_k|^2] applied in every state.
PowerPolicy uniform_power_fading(const SystemConfig& cfg, const FadingEnsemble& ens);

/// Channel inversion with a gain cutoff: devices with |h_k|^2 < cutoff stay
/// silent, survivors invert to eta = min surviving quality indicator.
PowerPolicy traditional_inversion(const SystemConfig& cfg, const ChannelVector& ch, double cutoff);

/// Fading variant: the static rule applied per state (instantaneous power
/// never exceeds Pbar_k); states with everyone truncated are silent.
PowerPolicy traditional_inversion(const SystemConfig& cfg, const FadingEnsemble& ens, double cutoff);

struct CutoffChoice {
    double cutoff = 0.0;
    double mse_unscaled = 0.0;
};

/// Default cutoff rule: minimize MSE over {0} union a small gain grid.
CutoffChoice best_inversion_cutoff(const SystemConfig& cfg, const ChannelVector& ch);
CutoffChoice best_inversion_cutoff(const SystemConfig& cfg, const FadingEnsemble& ens,
                                   std::size_t grid_size = 32);

}  // namespace aircomp
