#include "aircomp/static_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace aircomp {

namespace {

struct SortedInstance {
    std::vector<std::size_t> order;  // sorted rank -> original index
    std::vector<double> quality;     // q_k = Pbar|h|^2, nondecreasing
    std::vector<double> amp;         // s_k = sqrt(Pbar)|h|
};

SortedInstance sort_by_quality(const SystemConfig& cfg, const ChannelVector& ch) {
    if (ch.size() != cfg.num_devices)
        throw std::invalid_argument("static solver: channel vector has wrong device count");
    const std::size_t k_count = cfg.num_devices;
    std::vector<double> q(k_count), s(k_count);
    for (std::size_t k = 0; k < k_count; ++k) {
        const double mag = ch.magnitude(k);
        if (!(mag > 0.0))
            throw degenerate_channel_error("static solver: |h_k| = 0 (filter dead channels first)");
        q[k] = cfg.power_budgets[k] * ch.power_gain(k);
        s[k] = std::sqrt(cfg.power_budgets[k]) * mag;
    }
    SortedInstance inst;
    inst.order.resize(k_count);
    std::iota(inst.order.begin(), inst.order.end(), std::size_t{0});
    std::stable_sort(inst.order.begin(), inst.order.end(),
                     [&](std::size_t a, std::size_t b) { return q[a] < q[b]; });
    inst.quality.resize(k_count);
    inst.amp.resize(k_count);
    for (std::size_t r = 0; r < k_count; ++r) {
        inst.quality[r] = q[inst.order[r]];
        inst.amp[r] = s[inst.order[r]];
    }
    return inst;
}

StaticDiagnostics make_diagnostics(const SortedInstance& inst, double sigma_sq) {
    const std::size_t k_count = inst.quality.size();
    StaticDiagnostics d;
    d.quality = inst.quality;
    d.eta_tilde.resize(k_count);
    d.J.resize(k_count);
    // J(k) = sum_{i<k} s_i (s_k - s_i) - sigma^2, with J(1) = -sigma^2.
    double sum_q = 0.0, sum_s = 0.0, sum_s2 = 0.0;
    for (std::size_t r = 0; r < k_count; ++r) {
        d.J[r] = inst.amp[r] * sum_s - sum_s2 - sigma_sq;
        sum_q += inst.quality[r];
        sum_s += inst.amp[r];
        sum_s2 += inst.amp[r] * inst.amp[r];
        const double ratio = (sigma_sq + sum_q) / sum_s;
        d.eta_tilde[r] = ratio * ratio;
    }
    return d;
}

StaticSolution assemble(const SystemConfig& cfg, const ChannelVector& ch, SortedInstance inst,
                        StaticDiagnostics diag, std::size_t k_star, double eta_star) {
    const std::size_t k_count = cfg.num_devices;
    StaticSolution sol;
    sol.k_star = k_star;
    sol.eta_star = eta_star;
    sol.powers.resize(k_count);
    for (std::size_t r = 0; r < k_count; ++r) {
        const std::size_t dev = inst.order[r];
        if (r + 1 <= k_star)
            sol.powers[dev] = cfg.power_budgets[dev];
        else
            sol.powers[dev] = eta_star / ch.power_gain(dev);
    }
    sol.objective = detail::static_prefix_objective(inst.amp, cfg.noise_var, k_star, eta_star);
    sol.order = std::move(inst.order);
    sol.diagnostics = std::move(diag);
    return sol;
}

void verify_threshold_structure(const StaticSolution& sol, double /*sigma_sq*/) {
    // Lemma 3 properties 1 and 2, relative slack 1e-9.
    const auto& q = sol.diagnostics.quality;
    const auto& et = sol.diagnostics.eta_tilde;
    const std::size_t k_count = q.size();
    const std::size_t ks = sol.k_star;  // 1-based
    auto leq = [](double a, double b) { return a <= b + 1e-9 * (std::abs(a) + std::abs(b)); };

    bool ok = leq(q[ks - 1], et[ks - 1]);
    if (ks < k_count) ok = ok && leq(et[ks - 1], q[ks]);
    for (std::size_t k = 2; k <= k_count && ok; ++k) {
        if (k <= ks)
            ok = leq(q[k - 1], et[k - 2]);
        else
            ok = leq(et[k - 2], q[k - 1]);
    }
    if (!ok) throw std::logic_error("static solver: threshold structure check failed");
}

}  // namespace

namespace detail {

double static_prefix_objective(const std::vector<double>& sorted_amp, double sigma_sq,
                               std::size_t k, double eta) {
    const double inv_sqrt_eta = 1.0 / std::sqrt(eta);
    double mis = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double d = sorted_amp[i] * inv_sqrt_eta - 1.0;
        mis += d * d;
    }
    return mis + sigma_sq / eta;
}

}  // namespace detail

double eta_tilde(const SystemConfig& cfg, const ChannelVector& ch, std::size_t k) {
    if (k < 1 || k > cfg.num_devices) throw std::invalid_argument("eta_tilde: k out of range");
    if (ch.size() != cfg.num_devices)
        throw std::invalid_argument("eta_tilde: channel vector has wrong device count");
    double sum_q = 0.0, sum_s = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        sum_q += cfg.power_budgets[i] * ch.power_gain(i);
        sum_s += std::sqrt(cfg.power_budgets[i]) * ch.magnitude(i);
    }
    if (!(sum_s > 0.0)) throw degenerate_channel_error("eta_tilde: zero amplitude prefix");
    const double ratio = (cfg.noise_var + sum_q) / sum_s;
    return ratio * ratio;
}

StaticSolution solve_static(const SystemConfig& cfg, const ChannelVector& ch) {
    SortedInstance inst = sort_by_quality(cfg, ch);
    StaticDiagnostics diag = make_diagnostics(inst, cfg.noise_var);

    std::size_t best = 0;
    for (std::size_t r = 1; r < diag.eta_tilde.size(); ++r)
        if (diag.eta_tilde[r] < diag.eta_tilde[best]) best = r;
    const double eta_star = diag.eta_tilde[best];

    StaticSolution sol = assemble(cfg, ch, std::move(inst), std::move(diag), best + 1, eta_star);
    verify_threshold_structure(sol, cfg.noise_var);
    return sol;
}

StaticSolution solve_static_by_enumeration(const SystemConfig& cfg, const ChannelVector& ch) {
    SortedInstance inst = sort_by_quality(cfg, ch);
    StaticDiagnostics diag = make_diagnostics(inst, cfg.noise_var);
    const std::size_t k_count = cfg.num_devices;

    std::size_t best_k = 0;
    double best_eta = 0.0;
    double best_val = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < k_count; ++r) {
        const double lo = diag.quality[r];
        const double hi =
            (r + 1 < k_count) ? diag.quality[r + 1] : std::numeric_limits<double>::infinity();
        const double eta_k = std::min(hi, std::max(diag.eta_tilde[r], lo));
        const double val = detail::static_prefix_objective(inst.amp, cfg.noise_var, r + 1, eta_k);
        if (val < best_val) {
            best_val = val;
            best_k = r;
            best_eta = eta_k;
        }
    }
    return assemble(cfg, ch, std::move(inst), std::move(diag), best_k + 1, best_eta);
}

StaticSolution asymptotic_static(const SystemConfig& cfg, const ChannelVector& ch, SnrRegime regime) {
    SortedInstance inst = sort_by_quality(cfg, ch);
    StaticDiagnostics diag = make_diagnostics(inst, cfg.noise_var);
    const std::size_t k_count = cfg.num_devices;
    if (regime == SnrRegime::high_snr) {
        const double eta_star = inst.quality.front();
        return assemble(cfg, ch, std::move(inst), std::move(diag), 1, eta_star);
    }
    const double eta_star = diag.eta_tilde.back();
    return assemble(cfg, ch, std::move(inst), std::move(diag), k_count, eta_star);
}

}  // namespace aircomp
