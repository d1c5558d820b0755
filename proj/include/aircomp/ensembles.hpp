#pragma once

#include <cstdint>
#include <iosfwd>

#include "aircomp/types.hpp"

namespace aircomp {

/// i.i.d. Rayleigh fading: h_k ~ CN(0, sigma_h_sq), uniform weights 1/N.
/// Deterministic given the seed.
FadingEnsemble rayleigh_ensemble(std::size_t num_devices, std::size_t num_states,
                                 double sigma_h_sq, std::uint64_t seed);

/// Wrap explicit states; weights are normalized to sum to one.
FadingEnsemble fixed_ensemble(std::vector<ChannelVector> states, std::vector<double> weights);

/// Convenience: fixed ensemble from |h|^2 values, uniform or given weights.
FadingEnsemble ensemble_from_power_gains(const std::vector<std::vector<double>>& power_gains,
                                         std::vector<double> weights = {});

/// CSV interchange: columns state_index, weight, re_h_1, im_h_1, ..., re_h_K, im_h_K.
void write_ensemble_csv(std::ostream& os, const FadingEnsemble& ens);
FadingEnsemble read_ensemble_csv(std::istream& is);

}  // namespace aircomp
