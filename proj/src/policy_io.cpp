#include "aircomp/policy_io.hpp"

#include <cstdio>
#include <ostream>

namespace aircomp {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_policy_csv(std::ostream& os, const FadingEnsemble& ens, const PowerPolicy& policy,
                      const CsvHeaderBlock& header) {
    if (policy.num_states() != ens.num_states())
        throw std::invalid_argument("write_policy_csv: policy/ensemble state count mismatch");
    for (const auto& [key, values] : header) {
        os << "# " << key;
        for (double v : values) os << ',' << format_double(v);
        os << "\n";
    }
    const std::size_t k_count = ens.num_devices();
    os << "state_index,weight,eta";
    for (std::size_t k = 1; k <= k_count; ++k) os << ",p_" << k;
    os << "\n";
    for (std::size_t i = 0; i < ens.num_states(); ++i) {
        os << i << ',' << format_double(ens.weights[i]) << ',' << format_double(policy.denoise[i]);
        for (double p : policy.powers[i]) os << ',' << format_double(p);
        os << "\n";
    }
}

void write_fading_solution_csv(std::ostream& os, const FadingEnsemble& ens,
                               const FadingSolution& sol) {
    CsvHeaderBlock header;
    header.emplace_back("mu", sol.mu_opt);
    header.emplace_back("dual", std::vector<double>{sol.dual_value});
    header.emplace_back("primal", std::vector<double>{sol.primal_value});
    header.emplace_back("gap", std::vector<double>{sol.gap});
    write_policy_csv(os, ens, sol.policy, header);
}

void write_waterfilling_solution_csv(std::ostream& os, const FadingEnsemble& ens,
                                     const WaterfillingSolution& sol) {
    CsvHeaderBlock header;
    header.emplace_back("mu1", std::vector<double>{sol.mu1});
    header.emplace_back("threshold", std::vector<double>{sol.threshold});
    header.emplace_back("peak_gain", std::vector<double>{sol.peak_gain});
    write_policy_csv(os, ens, sol.policy, header);
}

void write_truncation_policy_csv(std::ostream& os, const LowComplexitySolution& sol) {
    const std::size_t k_count = sol.policy.xi.size();
    os << "eta";
    for (std::size_t k = 1; k <= k_count; ++k) os << ",xi_" << k;
    for (std::size_t k = 1; k <= k_count; ++k) os << ",inversion_prob_" << k;
    os << ",objective\n";
    os << format_double(sol.policy.eta);
    for (double x : sol.policy.xi) os << ',' << format_double(x);
    for (double q : sol.policy.inversion_prob) os << ',' << format_double(q);
    os << ',' << format_double(sol.objective) << "\n";
}

}  // namespace aircomp
