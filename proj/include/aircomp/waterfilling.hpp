#pragma once

#include "aircomp/types.hpp"

namespace aircomp {

/// Power rule of the power-limited device:
/// p = (sqrt(sigma^2)/(sqrt(mu1) |h|^2)) (|h| - sqrt(mu1 sigma^2))^+,
/// zero at |h| = 0.
double p1_closed_form(double h1_mag, double mu1, double sigma_sq);

struct WaterfillingSolution {
    double mu1 = 0.0;        // multiplier enforcing the budget equality
    PowerPolicy policy;      // all devices, all states
    double threshold = 0.0;  // cutoff magnitude sqrt(mu1 sigma^2): silent below
    double peak_gain = 0.0;  // magnitude of maximal transmit power, 2 sqrt(mu1 sigma^2)
};

/// Single power-limited device, everyone else unconstrained: channel-inversion
/// water-filling for the limited device, exact inversion for the rest, states
/// where the limited device is silent go fully silent.
WaterfillingSolution solve_p3(const SystemConfig& cfg, const FadingEnsemble& ens,
                              std::size_t limited_device);

}  // namespace aircomp
