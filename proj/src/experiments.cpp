#include "aircomp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "aircomp/baselines.hpp"
#include "aircomp/ensembles.hpp"
#include "aircomp/fading_solver.hpp"
#include "aircomp/lowcomplexity.hpp"
#include "aircomp/mse.hpp"
#include "aircomp/policy_io.hpp"
#include "aircomp/static_solver.hpp"
#include "aircomp/svg_plot.hpp"
#include "aircomp/waterfilling.hpp"

namespace aircomp {

namespace {

const double kHeteroPatternDb[5] = {2.7, 4.5, 5.0, 5.4, 6.4};

std::vector<std::size_t> default_k_sweep() { return {5, 10, 15, 20, 25, 30, 35, 40, 45, 50}; }
std::vector<double> default_snr_sweep() { return {0, 5, 10, 15, 20, 25, 30}; }

double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double stderr_of_mean(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / (static_cast<double>(v.size() - 1) * static_cast<double>(v.size())));
}

OuterMethod parse_method(const std::string& name) {
    if (name == "auto") return OuterMethod::automatic;
    if (name == "ellipsoid") return OuterMethod::ellipsoid;
    if (name == "subgradient") return OuterMethod::subgradient;
    throw std::invalid_argument("unknown outer method: " + name);
}

std::ofstream open_artifact(const ExperimentConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.out_dir);
    const auto path = std::filesystem::path(cfg.out_dir) / name;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open artifact for writing: " + path.string());
    return os;
}

void write_sweep_csv(std::ostream& os, const SweepResult& res) {
    os << res.x_name
       << ",scheme,mse_scaled_mean,mse_scaled_stderr,mse_unscaled_mean,gap_mean,warning\n";
    for (std::size_t i = 0; i < res.x.size(); ++i)
        for (const auto& st : res.points[i])
            os << format_double(res.x[i]) << ',' << st.scheme << ','
               << format_double(st.mse_scaled_mean) << ',' << format_double(st.mse_scaled_stderr)
               << ',' << format_double(st.mse_unscaled_mean) << ',' << format_double(st.gap_mean)
               << ',' << (st.warning ? 1 : 0) << "\n";
}

void write_sweep_svg(const ExperimentConfig& cfg, const std::string& stem, const SweepResult& res,
                     const std::string& title) {
    std::vector<PlotSeries> series;
    if (res.points.empty()) return;
    for (std::size_t s = 0; s < res.points.front().size(); ++s) {
        PlotSeries ps;
        ps.label = res.points.front()[s].scheme;
        for (std::size_t i = 0; i < res.x.size(); ++i) {
            ps.x.push_back(res.x[i]);
            ps.y.push_back(res.points[i][s].mse_scaled_mean);
        }
        series.push_back(std::move(ps));
    }
    auto os = open_artifact(cfg, stem + ".svg");
    write_svg_plot(os, title, res.x_name, "MSE (scaled)", series, true);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    std::uint64_t z = seed;
    for (std::uint64_t v : {a, b, c}) {
        z += 0x9e3779b97f4a7c15ULL * (v + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z ^= z >> 31;
    }
    return z;
}

SystemConfig make_system_config(std::size_t num_devices, double snr_db,
                                const std::string& snr_profile) {
    if (snr_profile == "uniform") {
        const double sigma_sq = std::pow(10.0, -snr_db / 10.0);
        return SystemConfig(num_devices, sigma_sq, std::vector<double>(num_devices, 1.0));
    }
    if (snr_profile == "heterogeneous") {
        if (num_devices % 5 != 0)
            throw std::invalid_argument("heterogeneous profile requires K divisible by 5");
        std::vector<double> budgets(num_devices);
        for (std::size_t k = 0; k < num_devices; ++k) {
            const double rho_db = kHeteroPatternDb[k % 5] + (snr_db - 5.0);
            budgets[k] = std::pow(10.0, rho_db / 10.0);
        }
        return SystemConfig(num_devices, 1.0, std::move(budgets));
    }
    throw std::invalid_argument("unknown snr_profile: " + snr_profile);
}

ExperimentConfig finalize_config(ExperimentConfig cfg) {
    static const char* kNames[] = {"static_demo",    "static_sweep_K",       "static_sweep_snr",
                                   "fading_sweep_K", "fading_sweep_snr",     "waterfilling_profile",
                                   "lowcomplexity_compare"};
    if (std::find(std::begin(kNames), std::end(kNames), cfg.experiment) == std::end(kNames))
        throw std::invalid_argument("unknown experiment: '" + cfg.experiment + "'");
    if (cfg.snr_profile != "uniform" && cfg.snr_profile != "heterogeneous")
        throw std::invalid_argument("unknown snr_profile: " + cfg.snr_profile);

    if (cfg.k_list.empty()) {
        if (cfg.experiment == "static_sweep_K" || cfg.experiment == "fading_sweep_K")
            cfg.k_list = default_k_sweep();
        else if (cfg.experiment == "waterfilling_profile")
            cfg.k_list = {2};
        else
            cfg.k_list = {20};
    }
    if (cfg.snr_db_list.empty()) {
        if (cfg.experiment == "static_sweep_snr" || cfg.experiment == "fading_sweep_snr" ||
            cfg.experiment == "lowcomplexity_compare")
            cfg.snr_db_list = default_snr_sweep();
        else if (cfg.experiment == "waterfilling_profile")
            cfg.snr_db_list = {0.0};  // Pbar = 1 W, sigma^2 = 1
        else
            cfg.snr_db_list = {5.0};
    }
    if (cfg.quick) {
        cfg.ensemble_size = std::min<std::size_t>(cfg.ensemble_size, 300);
        cfg.replicates = std::min<std::size_t>(cfg.replicates, 2);
    }
    const bool fading = cfg.experiment.rfind("fading", 0) == 0 ||
                        cfg.experiment == "waterfilling_profile" ||
                        cfg.experiment == "lowcomplexity_compare";
    if (fading && cfg.ensemble_size < 100 && !cfg.quick)
        throw std::invalid_argument("fading experiments require N >= 100");
    if (cfg.snr_db_list.empty()) throw std::invalid_argument("empty snr list");
    if (cfg.replicates < 1) throw std::invalid_argument("replicates must be >= 1");
    if (cfg.snr_profile == "heterogeneous")
        for (std::size_t k : cfg.k_list)
            if (k % 5 != 0)
                throw std::invalid_argument("heterogeneous profile requires K divisible by 5");
    parse_method(cfg.method);
    return cfg;
}

ExperimentConfig load_config_json(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config: " + path);
    nlohmann::json j;
    try {
        is >> j;
    } catch (const std::exception& e) {
        throw std::runtime_error("config parse error in " + path + ": " + e.what());
    }
    ExperimentConfig cfg;
    cfg.experiment = j.value("experiment", std::string{});
    if (j.contains("K")) cfg.k_list = {j.at("K").get<std::size_t>()};
    if (j.contains("K_list")) cfg.k_list = j.at("K_list").get<std::vector<std::size_t>>();
    if (j.contains("snr_db")) cfg.snr_db_list = {j.at("snr_db").get<double>()};
    if (j.contains("snr_db_list")) cfg.snr_db_list = j.at("snr_db_list").get<std::vector<double>>();
    cfg.snr_profile = j.value("snr_profile", cfg.snr_profile);
    cfg.ensemble_size = j.value("N", cfg.ensemble_size);
    cfg.replicates = j.value("replicates", cfg.replicates);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.sigma_h_sq = j.value("sigma_h_sq", cfg.sigma_h_sq);
    cfg.out_dir = j.value("out_dir", cfg.out_dir);
    cfg.method = j.value("method", cfg.method);
    cfg.plots = j.value("plots", cfg.plots);
    cfg.threads = j.value("threads", cfg.threads);
    return cfg;
}

SweepResult run_static_sweep(const ExperimentConfig& cfg, bool sweep_k) {
    SweepResult res;
    res.x_name = sweep_k ? "K" : "snr_db";
    const auto xs = sweep_k ? std::vector<double>(cfg.k_list.begin(), cfg.k_list.end())
                            : cfg.snr_db_list;
    for (std::size_t xi = 0; xi < xs.size(); ++xi) {
        const std::size_t k_count = sweep_k ? cfg.k_list[xi] : cfg.k_list.front();
        const double snr_db = sweep_k ? cfg.snr_db_list.front() : cfg.snr_db_list[xi];
        const SystemConfig sys = make_system_config(k_count, snr_db, cfg.snr_profile);

        SchemeStats opt{"optimal"}, fp{"full_power"}, ti{"traditional_inversion"};
        for (std::size_t r = 0; r < cfg.replicates; ++r) {
            const FadingEnsemble draw = rayleigh_ensemble(
                k_count, 1, cfg.sigma_h_sq, mix_seed(cfg.seed, 101 + xi, r, sweep_k ? 1 : 2));
            const ChannelVector& ch = draw.states.front();
            const double k2 = static_cast<double>(k_count) * static_cast<double>(k_count);

            opt.per_replicate_scaled.push_back(solve_static(sys, ch).objective / k2);
            const PowerPolicy fp_policy = full_power_static(sys, ch);
            fp.per_replicate_scaled.push_back(
                mse_single_state(sys, ch, fp_policy.powers[0], fp_policy.denoise[0]).total_scaled);
            ti.per_replicate_scaled.push_back(best_inversion_cutoff(sys, ch).mse_unscaled / k2);
        }
        for (SchemeStats* st : {&opt, &fp, &ti}) {
            st->mse_scaled_mean = mean(st->per_replicate_scaled);
            st->mse_scaled_stderr = stderr_of_mean(st->per_replicate_scaled);
            st->mse_unscaled_mean = st->mse_scaled_mean * static_cast<double>(k_count) *
                                    static_cast<double>(k_count);
        }
        res.x.push_back(xs[xi]);
        res.points.push_back({opt, fp, ti});
    }
    return res;
}

SweepResult run_fading_sweep(const ExperimentConfig& cfg, bool sweep_k) {
    SweepResult res;
    res.x_name = sweep_k ? "K" : "snr_db";
    const auto xs = sweep_k ? std::vector<double>(cfg.k_list.begin(), cfg.k_list.end())
                            : cfg.snr_db_list;
    OuterOptions opts;
    opts.method = parse_method(cfg.method);
    opts.threads = cfg.threads;
    opts.polish = 0;

    for (std::size_t xi = 0; xi < xs.size(); ++xi) {
        const std::size_t k_count = sweep_k ? cfg.k_list[xi] : cfg.k_list.front();
        const double snr_db = sweep_k ? cfg.snr_db_list.front() : cfg.snr_db_list[xi];
        const SystemConfig sys = make_system_config(k_count, snr_db, cfg.snr_profile);
        const double k2 = static_cast<double>(k_count) * static_cast<double>(k_count);

        SchemeStats opt{"optimal"}, lc{"lowcomplexity"}, un{"uniform"}, ti{"traditional_inversion"};
        for (std::size_t r = 0; r < cfg.replicates; ++r) {
            const FadingEnsemble ens = rayleigh_ensemble(
                k_count, cfg.ensemble_size, cfg.sigma_h_sq,
                mix_seed(cfg.seed, 201 + xi, r, sweep_k ? 3 : 4));

            const FadingSolution sol = outer_solve(sys, ens, opts);
            opt.per_replicate_scaled.push_back(sol.primal_value / k2);
            opt.gap_mean += sol.gap / static_cast<double>(cfg.replicates);
            opt.warning = opt.warning || !sol.converged;

            lc.per_replicate_scaled.push_back(solve_lowcomplexity(sys, ens).mse.total_scaled);
            un.per_replicate_scaled.push_back(
                mse_ensemble(sys, ens, uniform_power_fading(sys, ens)).total_scaled);
            ti.per_replicate_scaled.push_back(best_inversion_cutoff(sys, ens).mse_unscaled / k2);
        }
        for (SchemeStats* st : {&opt, &lc, &un, &ti}) {
            st->mse_scaled_mean = mean(st->per_replicate_scaled);
            st->mse_scaled_stderr = stderr_of_mean(st->per_replicate_scaled);
            st->mse_unscaled_mean = st->mse_scaled_mean * k2;
        }
        res.x.push_back(xs[xi]);
        res.points.push_back({opt, lc, un, ti});
    }
    return res;
}

namespace {

int run_static_demo(const ExperimentConfig& cfg) {
    const std::size_t k_count = cfg.k_list.front();
    const SystemConfig sys = make_system_config(k_count, cfg.snr_db_list.front(), cfg.snr_profile);
    const FadingEnsemble draw = rayleigh_ensemble(k_count, 1, cfg.sigma_h_sq,
                                                  mix_seed(cfg.seed, 7, 0, 0));
    const ChannelVector& ch = draw.states.front();
    const StaticSolution sol = solve_static(sys, ch);

    auto os = open_artifact(cfg, "static_demo.csv");
    os << "# k_star," << sol.k_star << "\n";
    os << "# eta_star," << format_double(sol.eta_star) << "\n";
    os << "# objective," << format_double(sol.objective) << "\n";
    os << "# sigma_sq," << format_double(sys.noise_var) << "\n";
    os << "rank,device,quality,eta_tilde,J,power,full_power\n";
    for (std::size_t r = 0; r < k_count; ++r) {
        const std::size_t dev = sol.order[r];
        os << r + 1 << ',' << dev << ',' << format_double(sol.diagnostics.quality[r]) << ','
           << format_double(sol.diagnostics.eta_tilde[r]) << ','
           << format_double(sol.diagnostics.J[r]) << ',' << format_double(sol.powers[dev]) << ','
           << (r + 1 <= sol.k_star ? 1 : 0) << "\n";
    }
    if (cfg.plots) {
        PlotSeries quality{"quality", {}, {}}, thresh{"eta_tilde", {}, {}}, power{"power", {}, {}};
        for (std::size_t r = 0; r < k_count; ++r) {
            const double x = static_cast<double>(r + 1);
            quality.x.push_back(x);
            quality.y.push_back(sol.diagnostics.quality[r]);
            thresh.x.push_back(x);
            thresh.y.push_back(sol.diagnostics.eta_tilde[r]);
            power.x.push_back(x);
            power.y.push_back(sol.powers[sol.order[r]]);
        }
        auto ps = open_artifact(cfg, "static_demo.svg");
        write_svg_plot(ps, "Threshold-based power control (sorted devices)", "device rank", "value",
                       {quality, thresh, power}, false);
    }
    return 0;
}

int run_waterfilling_profile(const ExperimentConfig& cfg) {
    const std::size_t k_count = cfg.k_list.front();
    const SystemConfig sys = make_system_config(k_count, cfg.snr_db_list.front(), cfg.snr_profile);
    const FadingEnsemble ens = rayleigh_ensemble(k_count, cfg.ensemble_size, cfg.sigma_h_sq,
                                                 mix_seed(cfg.seed, 9, 0, 0));
    const WaterfillingSolution sol = solve_p3(sys, ens, 0);

    {
        auto os = open_artifact(cfg, "waterfilling_policy.csv");
        write_waterfilling_solution_csv(os, ens, sol);
    }
    // profile sorted by the limited device's channel magnitude
    std::vector<std::size_t> idx(ens.num_states());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return ens.states[a].magnitude(0) < ens.states[b].magnitude(0);
    });
    auto os = open_artifact(cfg, "waterfilling_profile.csv");
    os << "# mu1," << format_double(sol.mu1) << "\n";
    os << "# threshold," << format_double(sol.threshold) << "\n";
    os << "# peak_gain," << format_double(sol.peak_gain) << "\n";
    for (std::size_t k = 0; k < k_count; ++k) {
        double realized = 0.0;
        for (std::size_t i = 0; i < ens.num_states(); ++i)
            realized += ens.weights[i] * sol.policy.powers[i][k];
        os << "# realized_avg_power_" << k + 1 << ',' << format_double(realized) << "\n";
    }
    os << "h1_mag,p1,eta\n";
    PlotSeries p1s{"p1", {}, {}}, etas{"eta", {}, {}};
    for (std::size_t i : idx) {
        const double h1 = ens.states[i].magnitude(0);
        const double p1 = sol.policy.powers[i][0];
        const double eta = sol.policy.denoise[i];
        os << format_double(h1) << ',' << format_double(p1) << ',' << format_double(eta) << "\n";
        if (p1 > 0.0) {
            p1s.x.push_back(h1);
            p1s.y.push_back(p1);
            etas.x.push_back(h1);
            etas.y.push_back(eta);
        }
    }
    if (cfg.plots) {
        auto ps = open_artifact(cfg, "waterfilling_profile.svg");
        write_svg_plot(ps, "Channel-inversion water-filling profile", "|h1|", "value", {p1s, etas},
                       false);
    }
    return 0;
}

int run_lowcomplexity_compare(const ExperimentConfig& cfg) {
    const std::size_t k_count = cfg.k_list.front();
    OuterOptions opts;
    opts.method = parse_method(cfg.method);
    opts.threads = cfg.threads;
    opts.polish = 0;

    auto os = open_artifact(cfg, "lowcomplexity_compare.csv");
    os << "snr_db,scheme,mse_scaled_mean,mse_scaled_stderr\n";
    bool first_detail = true;
    for (std::size_t xi = 0; xi < cfg.snr_db_list.size(); ++xi) {
        const double snr_db = cfg.snr_db_list[xi];
        const SystemConfig sys = make_system_config(k_count, snr_db, cfg.snr_profile);
        std::vector<double> v_opt, v_lc, v_un;
        for (std::size_t r = 0; r < cfg.replicates; ++r) {
            const FadingEnsemble ens = rayleigh_ensemble(k_count, cfg.ensemble_size, cfg.sigma_h_sq,
                                                         mix_seed(cfg.seed, 301 + xi, r, 5));
            v_opt.push_back(outer_solve(sys, ens, opts).primal_value /
                            (static_cast<double>(k_count) * static_cast<double>(k_count)));
            const LowComplexitySolution lc = solve_lowcomplexity(sys, ens);
            v_lc.push_back(lc.mse.total_scaled);
            v_un.push_back(mse_ensemble(sys, ens, uniform_power_fading(sys, ens)).total_scaled);
            if (first_detail) {
                auto ds = open_artifact(cfg, "lowcomplexity_policy.csv");
                write_truncation_policy_csv(ds, lc);
                first_detail = false;
            }
        }
        for (auto [name, v] : {std::pair{"optimal", &v_opt}, std::pair{"lowcomplexity", &v_lc},
                               std::pair{"uniform", &v_un}})
            os << format_double(snr_db) << ',' << name << ',' << format_double(mean(*v)) << ','
               << format_double(stderr_of_mean(*v)) << "\n";
    }
    return 0;
}

}  // namespace

int run_experiment(const ExperimentConfig& raw) {
    const ExperimentConfig cfg = finalize_config(raw);
    if (cfg.experiment == "static_demo") return run_static_demo(cfg);
    if (cfg.experiment == "waterfilling_profile") return run_waterfilling_profile(cfg);
    if (cfg.experiment == "lowcomplexity_compare") return run_lowcomplexity_compare(cfg);

    const bool sweep_k = cfg.experiment == "static_sweep_K" || cfg.experiment == "fading_sweep_K";
    const bool fading = cfg.experiment.rfind("fading", 0) == 0;
    const SweepResult res = fading ? run_fading_sweep(cfg, sweep_k) : run_static_sweep(cfg, sweep_k);
    const std::string stem = cfg.experiment + "_" + cfg.snr_profile;
    {
        auto os = open_artifact(cfg, stem + ".csv");
        write_sweep_csv(os, res);
    }
    if (cfg.plots) write_sweep_svg(cfg, stem, res, cfg.experiment);
    return 0;
}

}  // namespace aircomp
