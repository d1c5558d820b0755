#include "aircomp/ensembles.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace aircomp {

FadingEnsemble rayleigh_ensemble(std::size_t num_devices, std::size_t num_states,
                                 double sigma_h_sq, std::uint64_t seed) {
    if (num_devices < 1) throw std::invalid_argument("rayleigh_ensemble: K must be >= 1");
    if (num_states < 1) throw std::invalid_argument("rayleigh_ensemble: N must be >= 1");
    if (!(sigma_h_sq > 0.0)) throw std::invalid_argument("rayleigh_ensemble: sigma_h_sq must be > 0");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> unit(0.0, 1.0);
    const double comp_scale = std::sqrt(sigma_h_sq / 2.0);

    FadingEnsemble ens;
    ens.states.reserve(num_states);
    ens.weights.assign(num_states, 1.0 / static_cast<double>(num_states));
    for (std::size_t i = 0; i < num_states; ++i) {
        std::vector<std::complex<double>> h(num_devices);
        for (std::size_t k = 0; k < num_devices; ++k) {
            const double re = unit(rng);
            const double im = unit(rng);
            h[k] = std::complex<double>(re * comp_scale, im * comp_scale);
        }
        ens.states.emplace_back(std::move(h));
    }
    return ens;
}

FadingEnsemble fixed_ensemble(std::vector<ChannelVector> states, std::vector<double> weights) {
    if (states.empty()) throw std::invalid_argument("fixed_ensemble: no states");
    if (weights.size() != states.size())
        throw std::invalid_argument("fixed_ensemble: one weight per state required");
    const std::size_t k_count = states.front().size();
    if (k_count == 0) throw std::invalid_argument("fixed_ensemble: empty channel vector");
    for (const auto& st : states)
        if (st.size() != k_count) throw std::invalid_argument("fixed_ensemble: mismatched K across states");
    double total = 0.0;
    for (double w : weights) {
        if (!(w > 0.0)) throw std::invalid_argument("fixed_ensemble: weights must be positive");
        total += w;
    }
    for (double& w : weights) w /= total;

    FadingEnsemble ens;
    ens.states = std::move(states);
    ens.weights = std::move(weights);
    return ens;
}

FadingEnsemble ensemble_from_power_gains(const std::vector<std::vector<double>>& power_gains,
                                         std::vector<double> weights) {
    std::vector<ChannelVector> states;
    states.reserve(power_gains.size());
    for (const auto& g : power_gains) states.push_back(ChannelVector::from_power_gains(g));
    if (weights.empty()) weights.assign(power_gains.size(), 1.0);
    return fixed_ensemble(std::move(states), std::move(weights));
}

void write_ensemble_csv(std::ostream& os, const FadingEnsemble& ens) {
    const std::size_t k_count = ens.num_devices();
    os << "state_index,weight";
    for (std::size_t k = 1; k <= k_count; ++k) os << ",re_h_" << k << ",im_h_" << k;
    os << "\n";
    char buf[32];
    for (std::size_t i = 0; i < ens.num_states(); ++i) {
        os << i;
        std::snprintf(buf, sizeof(buf), "%.17g", ens.weights[i]);
        os << ',' << buf;
        for (std::size_t k = 0; k < k_count; ++k) {
            std::snprintf(buf, sizeof(buf), "%.17g", ens.states[i].gains[k].real());
            os << ',' << buf;
            std::snprintf(buf, sizeof(buf), "%.17g", ens.states[i].gains[k].imag());
            os << ',' << buf;
        }
        os << "\n";
    }
}

FadingEnsemble read_ensemble_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("ensemble csv: empty input");
    std::vector<ChannelVector> states;
    std::vector<double> weights;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
        if (vals.size() < 4 || (vals.size() - 2) % 2 != 0)
            throw std::invalid_argument("ensemble csv: malformed row");
        weights.push_back(vals[1]);
        std::vector<std::complex<double>> h;
        for (std::size_t j = 2; j < vals.size(); j += 2) h.emplace_back(vals[j], vals[j + 1]);
        states.emplace_back(std::move(h));
    }
    return fixed_ensemble(std::move(states), std::move(weights));
}

}  // namespace aircomp
