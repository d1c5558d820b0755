#include "aircomp/lowcomplexity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "aircomp/mse.hpp"

namespace aircomp {

namespace {

// Per-device view sorted by gain descending, grouped by equal gain so a
// threshold never splits states sharing the same |h|^2.
struct DeviceLadder {
    std::vector<double> gain;        // distinct gains, descending, positive only
    std::vector<double> cum_weight;  // inverted-probability at each group end
    std::vector<double> cum_cost;    // inversion cost per unit eta at each group end
    bool has_zero_gain = false;
    double max_gain = 0.0;
};

DeviceLadder build_ladder(const FadingEnsemble& ens, std::size_t device) {
    const std::size_t n = ens.num_states();
    std::vector<std::pair<double, double>> rows;  // (gain, weight)
    rows.reserve(n);
    DeviceLadder lad;
    for (std::size_t i = 0; i < n; ++i) {
        const double g = ens.states[i].power_gain(device);
        if (g > 0.0)
            rows.emplace_back(g, ens.weights[i]);
        else
            lad.has_zero_gain = true;
    }
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    double w = 0.0, c = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        w += rows[i].second;
        c += rows[i].second / rows[i].first;
        const bool group_end = (i + 1 == rows.size()) || rows[i + 1].first != rows[i].first;
        if (group_end) {
            lad.gain.push_back(rows[i].first);
            lad.cum_weight.push_back(w);
            lad.cum_cost.push_back(c);
        }
    }
    lad.max_gain = lad.gain.empty() ? 0.0 : lad.gain.front();
    return lad;
}

struct LadderPick {
    double xi;
    double inversion_prob;
};

LadderPick pick_threshold(const DeviceLadder& lad, double eta, double budget) {
    // cost of inverting everything with gain >= lad.gain[m] is eta * cum_cost[m];
    // keep the largest set not exceeding the budget.
    const double slack = budget * (1.0 + 1e-12);
    std::ptrdiff_t best = -1;
    for (std::size_t m = 0; m < lad.gain.size(); ++m) {
        if (eta * lad.cum_cost[m] <= slack)
            best = static_cast<std::ptrdiff_t>(m);
        else
            break;
    }
    if (best < 0) {
        const double above = lad.max_gain > 0.0
                                 ? std::nextafter(lad.max_gain, std::numeric_limits<double>::infinity())
                                 : 1.0;
        return {above, 0.0};
    }
    const auto m = static_cast<std::size_t>(best);
    const bool all_included = (m + 1 == lad.gain.size());
    const double xi = (all_included && !lad.has_zero_gain) ? 0.0 : lad.gain[m];
    return {xi, lad.cum_weight[m]};
}

}  // namespace

double xi_for_eta(const FadingEnsemble& ens, std::size_t device, double eta, double budget) {
    if (device >= ens.num_devices()) throw std::invalid_argument("xi_for_eta: bad device index");
    if (!(eta > 0.0)) throw std::invalid_argument("xi_for_eta: eta must be > 0");
    if (!(budget > 0.0)) throw std::invalid_argument("xi_for_eta: budget must be > 0");
    const DeviceLadder lad = build_ladder(ens, device);
    if (lad.gain.empty())
        throw std::invalid_argument("xi_for_eta: device has no state with positive gain");
    return pick_threshold(lad, eta, budget).xi;
}

std::vector<double> default_eta_grid(const SystemConfig& cfg, const FadingEnsemble& ens) {
    double top = 0.0;
    for (std::size_t k = 0; k < cfg.num_devices; ++k) {
        double mean_gain = 0.0;
        for (std::size_t i = 0; i < ens.num_states(); ++i)
            mean_gain += ens.weights[i] * ens.states[i].power_gain(k);
        top = std::max(top, cfg.power_budgets[k] * mean_gain);
    }
    const double lo = 1e-2 * cfg.noise_var;
    const double hi = std::max(1e4 * top, lo * 2.0);
    const std::size_t count = 200;
    std::vector<double> grid(count);
    const double step = std::log(hi / lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) grid[i] = lo * std::exp(step * static_cast<double>(i));
    return grid;
}

LowComplexitySolution solve_lowcomplexity(const SystemConfig& cfg, const FadingEnsemble& ens,
                                          std::span<const double> eta_grid) {
    const std::size_t k_count = cfg.num_devices;
    if (ens.num_devices() != k_count)
        throw std::invalid_argument("solve_lowcomplexity: ensemble/config device count mismatch");
    std::vector<double> fallback;
    if (eta_grid.empty()) {
        fallback = default_eta_grid(cfg, ens);
        eta_grid = fallback;
    }

    std::vector<DeviceLadder> ladders;
    ladders.reserve(k_count);
    for (std::size_t k = 0; k < k_count; ++k) ladders.push_back(build_ladder(ens, k));

    double best_val = std::numeric_limits<double>::infinity();
    double best_eta = 0.0;
    for (double eta : eta_grid) {
        if (!(eta > 0.0)) throw std::invalid_argument("solve_lowcomplexity: eta grid must be positive");
        double inv_sum = 0.0;
        for (std::size_t k = 0; k < k_count; ++k)
            inv_sum += pick_threshold(ladders[k], eta, cfg.power_budgets[k]).inversion_prob;
        const double val = static_cast<double>(k_count) - inv_sum + cfg.noise_var / eta;
        if (val < best_val) {
            best_val = val;
            best_eta = eta;
        }
    }

    LowComplexitySolution sol;
    sol.policy.eta = best_eta;
    sol.policy.xi.resize(k_count);
    sol.policy.inversion_prob.resize(k_count);
    for (std::size_t k = 0; k < k_count; ++k) {
        const LadderPick pick = pick_threshold(ladders[k], best_eta, cfg.power_budgets[k]);
        sol.policy.xi[k] = pick.xi;
        sol.policy.inversion_prob[k] = pick.inversion_prob;
    }
    sol.objective = best_val;
    sol.mse = mse_ensemble(cfg, ens, realize_truncation_policy(ens, sol.policy));
    return sol;
}

PowerPolicy realize_truncation_policy(const FadingEnsemble& ens, const TruncationPolicy& policy) {
    const std::size_t n = ens.num_states();
    const std::size_t k_count = ens.num_devices();
    if (policy.xi.size() != k_count)
        throw std::invalid_argument("realize_truncation_policy: xi size mismatch");
    PowerPolicy out;
    out.powers.resize(n);
    out.denoise.assign(n, policy.eta);  // eta is fading-independent by construction
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> p(k_count, 0.0);
        for (std::size_t k = 0; k < k_count; ++k) {
            const double g = ens.states[i].power_gain(k);
            if (g >= policy.xi[k] && g > 0.0) p[k] = policy.eta / g;
        }
        out.powers[i] = std::move(p);
    }
    return out;
}

}  // namespace aircomp
