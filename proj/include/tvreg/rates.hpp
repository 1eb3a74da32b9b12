#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "tvreg/kernel_averages.hpp"
#include "tvreg/parallel.hpp"
#include "tvreg/rng.hpp"
#include "tvreg/tvar.hpp"

namespace tvreg {

enum class RateMode { InProbability, AlmostSure };

// Parameters of the uniform-rate theory: mixing decay beta, moment order s,
// parameter dimension m, expansion constant c, moment growth exponent lambda.
struct RateParams {
    double beta = 10.0;
    double s = 4.0;
    int m = 0;
    double c = 1.0;
    double lambda = 0.0;
    RateMode mode = RateMode::InProbability;
};

struct ThetaResult {
    double theta = 0.0;
    double beta_lower_bound = 0.0;
    bool admissible = false;
};

// Bandwidth-admissibility exponent. The in-probability case needs s > 2, the
// almost-sure case s > 4; admissibility additionally requires beta above the
// reported lower bound, and then theta lies in (0, 1).
inline ThetaResult theta(const RateParams& p) {
    if (p.m < 0) throw InvalidParamsError("parameter dimension m must be nonnegative");
    if (!(p.c > 0.0)) throw InvalidParamsError("c must be positive");
    if (!(p.lambda >= 0.0)) throw InvalidParamsError("lambda must be nonnegative");
    const double s = p.s;
    const double beta = p.beta;
    const double m = static_cast<double>(p.m);
    ThetaResult r;
    if (p.mode == RateMode::InProbability) {
        if (!(s > 2.0)) throw InvalidParamsError("in-probability rate needs moment order s > 2");
        r.theta = (beta * (s - 2.0) - m * (s - 1.0) * (1.0 + 2.0 * p.c) - 2.0 * s + 1.0) /
                  (beta * s + m * (s - 1.0) + 1.0);
        r.beta_lower_bound = (m * (s - 1.0) * (1.0 + 2.0 * p.c) + 2.0 * s - 1.0) / (s - 2.0);
    } else {
        if (!(s > 4.0)) throw InvalidParamsError("almost-sure rate needs moment order s > 4");
        r.theta = ((beta + 1.0) * (s - 4.0) - (s - 1.0) * (5.0 + m * (1.0 + 2.0 * p.c))) /
                  ((beta + 1.0) * s + (m + 1.0) * (s - 1.0));
        r.beta_lower_bound = ((s - 1.0) * (5.0 + m * (1.0 + 2.0 * p.c)) - (s - 4.0)) / (s - 4.0);
    }
    r.admissible = beta > r.beta_lower_bound;
    if (r.admissible && !(r.theta > 0.0 && r.theta < 1.0))
        throw InternalError("admissible parameters must give theta in (0, 1)");
    return r;
}

// The uniform-rate envelope d_T^lambda sqrt(ln T / (T h)).
inline double rate_target(long T, double h, double lambda, double d_t) {
    if (T < 3) throw InvalidParamsError("need T >= 3");
    if (!(h > 0.0 && h < 0.5)) throw InvalidBandwidthError("bandwidth must lie in (0, 1/2)");
    return std::pow(d_t, lambda) * std::sqrt(std::log(static_cast<double>(T)) / (static_cast<double>(T) * h));
}

enum class ProcessKind { IID, AR1 };

struct RateCheckConfig {
    KernelSpec spec = epanechnikov();
    ProcessKind process = ProcessKind::IID;
    double ar_coef = 0.75;  // used when process == AR1
    int j = 0;
    std::vector<long> T_list = {500, 1000, 2000, 4000, 8000};
    std::function<double(long)> h_rule;  // default (ln T / T)^{1/5}
    int n_reps = 100;
    std::uint64_t seed = 1;
    int grid_points = 201;
    int threads = 1;
    // theta used for the bandwidth-rule admissibility check; both supported
    // processes mix geometrically, so a comfortable beta is the default.
    RateParams rate_params{10.0, 6.0, 0, 1.0, 0.0, RateMode::InProbability};
};

struct SlopeReport {
    double slope = 0.0;
    double r_squared = 0.0;
    std::vector<long> T;
    std::vector<double> target;      // rate envelope per T
    std::vector<double> median_sup;  // median over replications of sup_x |psi_hat|
};

namespace detail {

inline double median_inplace(std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace detail

// Empirical check of the uniform envelope: per T, simulate zero-mean data,
// record the median over replications of sup_x |psi_hat(x)| on a uniform
// grid, then regress log(median) on log(rate_target).
inline SlopeReport verify_rate(const RateCheckConfig& cfg) {
    if (cfg.n_reps < 2 || cfg.T_list.size() < 2)
        throw InvalidParamsError("slope regression needs at least 2 sample sizes and 2 replications");
    const std::function<double(long)> h_rule =
        cfg.h_rule ? cfg.h_rule : [](long T) {
            return std::pow(std::log(static_cast<double>(T)) / static_cast<double>(T), 0.2);
        };

    std::vector<long> Ts = cfg.T_list;
    std::sort(Ts.begin(), Ts.end());

    // ln T / (T^theta h) must shrink along the schedule, otherwise the
    // bandwidth rule is outside the theory. The condition is asymptotic, so
    // the numeric proxy compares the ends of the schedule.
    const double th = theta(cfg.rate_params).theta;
    auto admissibility_ratio = [&](long T) {
        return std::log(static_cast<double>(T)) / (std::pow(static_cast<double>(T), th) * h_rule(T));
    };
    if (!(admissibility_ratio(Ts.back()) < admissibility_ratio(Ts.front())))
        throw InvalidBandwidthError("bandwidth rule violates ln T / (T^theta h) -> 0 along T_list");

    const std::vector<double> grid = uniform_grid(cfg.grid_points);
    SlopeReport rep;
    rep.T = Ts;
    rep.target.resize(Ts.size());
    rep.median_sup.resize(Ts.size());

    for (size_t it = 0; it < Ts.size(); ++it) {
        const long T = Ts[it];
        const double h = h_rule(T);
        if (!(h > 0.0 && h < 0.5)) throw InvalidBandwidthError("bandwidth rule left (0, 1/2)");
        std::vector<double> sups(static_cast<size_t>(cfg.n_reps));
        parallel_for(
            cfg.n_reps,
            [&](long r) {
                Rng rng = Rng::stream(cfg.seed, static_cast<std::uint64_t>(it) * 1000003ULL +
                                                    static_cast<std::uint64_t>(r));
                std::vector<double> eps(static_cast<size_t>(T));
                if (cfg.process == ProcessKind::IID) {
                    for (auto& e : eps) e = rng.normal();
                } else {
                    const double phi = cfg.ar_coef;
                    double v = rng.normal() / std::sqrt(1.0 - phi * phi);
                    for (auto& e : eps) {
                        v = phi * v + rng.normal();
                        e = v;
                    }
                }
                const DesignSeries series(std::move(eps));
                double sup = 0.0;
                for (const double x : grid)
                    sup = std::max(sup, std::abs(psi_hat(series, cfg.spec, x, h, cfg.j)));
                sups[static_cast<size_t>(r)] = sup;
            },
            cfg.threads);
        rep.median_sup[it] = detail::median_inplace(sups);
        rep.target[it] = rate_target(T, h, 0.0, 1.0);
    }

    // OLS of log median on log target.
    const size_t n = Ts.size();
    double mx = 0.0, my = 0.0;
    std::vector<double> lx(n), ly(n);
    for (size_t i = 0; i < n; ++i) {
        lx[i] = std::log(rep.target[i]);
        ly[i] = std::log(rep.median_sup[i]);
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    rep.slope = sxy / sxx;
    rep.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return rep;
}

}  // namespace tvreg
