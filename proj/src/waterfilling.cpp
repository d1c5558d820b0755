#include "aircomp/waterfilling.hpp"

#include <cmath>

namespace aircomp {

double p1_closed_form(double h1_mag, double mu1, double sigma_sq) {
    if (!(mu1 > 0.0)) throw std::invalid_argument("p1_closed_form: mu1 must be > 0");
    if (!(h1_mag >= 0.0)) throw std::invalid_argument("p1_closed_form: negative magnitude");
    if (h1_mag == 0.0) return 0.0;
    const double cutoff = std::sqrt(mu1 * sigma_sq);
    const double excess = h1_mag - cutoff;
    if (excess <= 0.0) return 0.0;
    return std::sqrt(sigma_sq) / (std::sqrt(mu1) * h1_mag * h1_mag) * excess;
}

WaterfillingSolution solve_p3(const SystemConfig& cfg, const FadingEnsemble& ens,
                              std::size_t limited_device) {
    const std::size_t k_count = cfg.num_devices;
    const std::size_t n = ens.num_states();
    if (n == 0) throw std::invalid_argument("solve_p3: empty ensemble");
    if (ens.num_devices() != k_count)
        throw std::invalid_argument("solve_p3: ensemble/config device count mismatch");
    if (limited_device >= k_count) throw std::invalid_argument("solve_p3: bad device index");

    bool any_positive = false;
    for (const auto& st : ens.states)
        if (st.magnitude(limited_device) > 0.0) {
            any_positive = true;
            break;
        }
    if (!any_positive)
        throw degenerate_channel_error("solve_p3: limited device silent in every state");

    const double budget = cfg.power_budgets[limited_device];
    const double sigma_sq = cfg.noise_var;
    auto avg_p1 = [&](double mu) {
        double e = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            e += ens.weights[i] * p1_closed_form(ens.states[i].magnitude(limited_device), mu, sigma_sq);
        return e;
    };

    // E[p1] is continuous and strictly decreasing until it hits zero;
    // bracket then bisect in log(mu) to the budget equality.
    double lo = 1e-12;
    int guard = 0;
    while (avg_p1(lo) < budget && lo > 1e-290 && ++guard < 1000) lo *= 1e-2;
    double hi = 1.0;
    guard = 0;
    while (avg_p1(hi) > budget && ++guard < 4000) hi *= 2.0;
    if (lo > hi) lo = hi * 1e-6;
    double mu1 = hi;
    for (int i = 0; i < 300; ++i) {
        mu1 = std::sqrt(lo * hi);
        const double e = avg_p1(mu1);
        if (std::abs(e - budget) <= 1e-10 * budget) break;
        if (e > budget)
            lo = mu1;
        else
            hi = mu1;
        if (hi / lo < 1.0 + 1e-16) break;
    }

    WaterfillingSolution sol;
    sol.mu1 = mu1;
    sol.threshold = std::sqrt(mu1 * sigma_sq);
    sol.peak_gain = 2.0 * sol.threshold;
    sol.policy.powers.resize(n);
    sol.policy.denoise.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double h1 = ens.states[i].magnitude(limited_device);
        const double p1 = p1_closed_form(h1, mu1, sigma_sq);
        std::vector<double> p(k_count, 0.0);
        if (p1 > 0.0) {
            const double aligned = (sigma_sq + p1 * h1 * h1) / (std::sqrt(p1) * h1);
            const double eta = aligned * aligned;
            for (std::size_t k = 0; k < k_count; ++k) {
                if (k == limited_device) {
                    p[k] = p1;
                    continue;
                }
                const double g2 = ens.states[i].power_gain(k);
                if (!(g2 > 0.0))
                    throw degenerate_channel_error(
                        "solve_p3: zero channel for an unconstrained device on a non-silent state");
                p[k] = eta / g2;
            }
            sol.policy.denoise[i] = eta;
        } else {
            sol.policy.denoise[i] = kSilentEta;
        }
        sol.policy.powers[i] = std::move(p);
    }
    return sol;
}

}  // namespace aircomp
