#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "tvreg/bandwidth.hpp"
#include "tvreg/parallel.hpp"
#include "tvreg/tvar.hpp"

namespace tvreg {

// Benchmark data-generating process: a smooth step-like trend with a nearly
// constant, slowly oscillating autoregressive coefficient.
inline double benchmark_trend(double u) {
    return -70.0 + 134.0 * u - 120.0 * std::tanh(1.1 * (u - 0.56));
}

inline double benchmark_ar_coef(double u) {
    return 0.755 + 0.02 * std::exp(-0.36 * u) * std::sin(1.72 * std::numbers::pi * u + 2.1);
}

inline TvarModel benchmark_model(double sigma2_e) {
    TvarModel m;
    m.trend = benchmark_trend;
    m.ar_coef = benchmark_ar_coef;
    m.sigma_e = std::sqrt(sigma2_e);
    m.phi_bound = 0.8;
    return m;
}

struct MonteCarloConfig {
    std::vector<long> T_list = {100, 300, 700};
    std::vector<double> sigma2_list = {1.0, 3.0};
    int n_reps = 200;
    std::uint64_t seed_base = 20240901;
    BandwidthMode bandwidth_mode = BandwidthMode::CV;
    double fixed_h = 0.25;
    double fixed_v = 0.2;
    double c_v = 1.0;  // step-2 bandwidth multiple in CV mode
    KernelSpec spec = epanechnikov();
    int threads = 1;
};

struct MaseReport {
    long T = 0;
    double sigma2 = 0.0;
    int n_reps = 0;
    double mase_g = 0.0;
    double mase_phi = 0.0;
    std::array<double, 5> ase_g_quantiles{};    // 5%, 25%, 50%, 75%, 95%
    std::array<double, 5> ase_phi_quantiles{};  // same probs
    std::uint64_t seed_base = 0;
};

namespace detail {

inline std::array<double, 5> five_quantiles(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::array<double, 5> probs = {0.05, 0.25, 0.50, 0.75, 0.95};
    std::array<double, 5> out{};
    const double n = static_cast<double>(v.size());
    for (size_t k = 0; k < probs.size(); ++k) {
        const double pos = probs[k] * (n - 1.0);
        const size_t lo = static_cast<size_t>(std::floor(pos));
        const size_t hi = std::min(lo + 1, v.size() - 1);
        const double frac = pos - std::floor(pos);
        out[k] = (1.0 - frac) * v[lo] + frac * v[hi];
    }
    return out;
}

}  // namespace detail

// Replicated two-step fits on the benchmark process; reports the mean and the
// spread of the average squared errors of both curve estimates. Replications
// draw from independent seed-derived streams, so results are identical for
// any thread count.
inline std::vector<MaseReport> mc_table1(const MonteCarloConfig& cfg) {
    if (cfg.n_reps < 1) throw InvalidParamsError("need at least one replication");
    std::vector<MaseReport> reports;
    std::uint64_t combo = 0;
    for (const long T : cfg.T_list) {
        for (const double sigma2 : cfg.sigma2_list) {
            const TvarModel model = benchmark_model(sigma2);
            std::vector<double> ase_g(static_cast<size_t>(cfg.n_reps));
            std::vector<double> ase_phi(static_cast<size_t>(cfg.n_reps));
            parallel_for(
                cfg.n_reps,
                [&](long r) {
                    const std::uint64_t stream =
                        combo * static_cast<std::uint64_t>(cfg.n_reps) + static_cast<std::uint64_t>(r);
                    const DesignSeries series =
                        simulate(model, T, Rng::stream(cfg.seed_base, stream).next_u64());
                    double h, v;
                    if (cfg.bandwidth_mode == BandwidthMode::CV) {
                        CvConfig cv;
                        h = select_bandwidth(series, cfg.spec, cv);
                        v = default_step2_bandwidth(h, cfg.c_v);
                    } else {
                        h = cfg.fixed_h;
                        v = cfg.fixed_v;
                    }
                    const TwoStepFit fit = fit_two_step(series, cfg.spec, cfg.spec, h, v, 2.0 * v);

                    double sg = 0.0;
                    for (size_t k = 0; k < fit.g_hat.grid.size(); ++k) {
                        const double d = fit.g_hat.values[k] - model.trend(fit.g_hat.grid[k]);
                        sg += d * d;
                    }
                    ase_g[static_cast<size_t>(r)] = sg / static_cast<double>(fit.g_hat.grid.size());

                    double sp = 0.0;
                    for (size_t k = 0; k < fit.phi_hat.grid.size(); ++k) {
                        const double d = fit.phi_hat.values[k] - model.ar_coef(fit.phi_hat.grid[k]);
                        sp += d * d;
                    }
                    ase_phi[static_cast<size_t>(r)] = sp / static_cast<double>(fit.phi_hat.grid.size());
                },
                cfg.threads);

            MaseReport rep;
            rep.T = T;
            rep.sigma2 = sigma2;
            rep.n_reps = cfg.n_reps;
            rep.seed_base = cfg.seed_base;
            for (const double a : ase_g) rep.mase_g += a;
            for (const double a : ase_phi) rep.mase_phi += a;
            rep.mase_g /= static_cast<double>(cfg.n_reps);
            rep.mase_phi /= static_cast<double>(cfg.n_reps);
            rep.ase_g_quantiles = detail::five_quantiles(ase_g);
            rep.ase_phi_quantiles = detail::five_quantiles(ase_phi);
            reports.push_back(rep);
            ++combo;
        }
    }
    return reports;
}

// Tidy CSV, one row per (T, sigma2) cell.
inline std::string mase_csv(const std::vector<MaseReport>& reports) {
    std::string out =
        "T,sigma2,n_reps,mase_g,mase_phi,"
        "ase_g_q05,ase_g_q25,ase_g_q50,ase_g_q75,ase_g_q95,"
        "ase_phi_q05,ase_phi_q25,ase_phi_q50,ase_phi_q75,ase_phi_q95,seed_base\n";
    char buf[512];
    for (const MaseReport& r : reports) {
        std::snprintf(buf, sizeof(buf),
                      "%ld,%.17g,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%llu\n",
                      r.T, r.sigma2, r.n_reps, r.mase_g, r.mase_phi, r.ase_g_quantiles[0],
                      r.ase_g_quantiles[1], r.ase_g_quantiles[2], r.ase_g_quantiles[3],
                      r.ase_g_quantiles[4], r.ase_phi_quantiles[0], r.ase_phi_quantiles[1],
                      r.ase_phi_quantiles[2], r.ase_phi_quantiles[3], r.ase_phi_quantiles[4],
                      static_cast<unsigned long long>(r.seed_base));
        out += buf;
    }
    return out;
}

}  // namespace tvreg
