#pragma once

#include <cmath>
#include <cstdlib>
#include <vector>

#include "tvreg/local_linear.hpp"

namespace tvreg {

enum class BandwidthMode { CV, Fixed };

// hv-block cross-validation for dependent data. For each validation center t
// the local linear prediction at t/T is recomputed with the whole block
// {t - (v_block + h_gap), ..., t + (v_block + h_gap)} deleted from the moment
// sums; the gap keeps serially correlated neighbors from leaking into the
// score. Negative fields mean "resolve a default against (T, h)".
struct CvConfig {
    std::vector<double> h_grid;   // empty -> default_h_grid(T)
    long v_block = -1;            // default ceil(0.02 T)
    long h_gap = -1;              // default ceil(0.25 T h), scales with the kernel window
    long subsample_stride = -1;   // default max(1, T/100)

    long resolved_v_block(long T) const {
        return v_block >= 0 ? v_block : static_cast<long>(std::ceil(0.02 * static_cast<double>(T)));
    }
    long resolved_h_gap(long T, double h) const {
        return h_gap >= 0 ? h_gap : static_cast<long>(std::ceil(0.25 * static_cast<double>(T) * h));
    }
    long resolved_stride(long T) const {
        return subsample_stride >= 1 ? subsample_stride : std::max(1L, T / 100);
    }
};

// 20 log-spaced candidates from 0.5 (ln T / T)^{1/5} up to just below the
// h < 1/2 cap.
inline std::vector<double> default_h_grid(long T, int n = 20) {
    const double lo = 0.5 * std::pow(std::log(static_cast<double>(T)) / static_cast<double>(T), 0.2);
    const double hi = 0.49;
    if (!(lo > 0.0 && lo < hi)) throw InvalidParamsError("cannot build default bandwidth grid for this T");
    std::vector<double> g(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double frac = n == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(n - 1);
        g[static_cast<size_t>(k)] = std::exp(std::log(lo) + frac * (std::log(hi) - std::log(lo)));
    }
    return g;
}

// Mean squared leave-block-out prediction error for one candidate bandwidth.
// Centers whose deleted-design matrix is empty or singular are skipped; more
// than 50% skipped raises InfeasibleBandwidthError.
inline double cv_score(const DesignSeries& series, const KernelSpec& spec, double h,
                       const CvConfig& cfg) {
    if (!(h > 0.0 && h < 0.5)) throw InvalidBandwidthError("bandwidth must lie in (0, 1/2)");
    const long T = series.size();
    const long v = cfg.resolved_v_block(T);
    const long g = cfg.resolved_h_gap(T, h);
    const long stride = cfg.resolved_stride(T);
    if (v < 0 || g < 0) throw InvalidParamsError("block sizes must be nonnegative");
    if (2 * (v + g) + 1 >= T) throw InvalidParamsError("deleted block covers the whole sample");

    const long half_block = v + g;
    double acc = 0.0;
    long used = 0, skipped = 0;
    for (long t = 1; t <= T; t += stride) {
        const double x = static_cast<double>(t) / static_cast<double>(T);
        const IndexRange win = support_indices(T, x, h);
        double a0 = 0.0, a1 = 0.0, a2 = 0.0, d0 = 0.0, d1 = 0.0;
        for (long i = win.first; i <= win.last; ++i) {
            if (std::labs(i - t) <= half_block) continue;
            const double pi = (static_cast<double>(i) / static_cast<double>(T) - x) / h;
            const double kv = eval(spec, pi);
            const double yk = series.values[static_cast<size_t>(i - 1)] * kv;
            a0 += kv;
            a1 += kv * pi;
            a2 += kv * pi * pi;
            d0 += yk;
            d1 += yk * pi;
        }
        const double norm = static_cast<double>(T) * h;
        a0 /= norm;
        a1 /= norm;
        a2 /= norm;
        const double det = a0 * a2 - a1 * a1;
        if (!(std::abs(det) >= 1e-12)) {
            ++skipped;
            continue;
        }
        const double pred = (a2 * (d0 / norm) - a1 * (d1 / norm)) / det;
        const double err = series.values[static_cast<size_t>(t - 1)] - pred;
        acc += err * err;
        ++used;
    }
    if (skipped > used)
        throw InfeasibleBandwidthError("more than half of the validation centers were unusable at h=" +
                                       std::to_string(h));
    return acc / static_cast<double>(used);
}

struct CvPoint {
    double h = 0.0;
    double score = 0.0;
    bool feasible = false;
};

// Score every candidate; infeasible candidates are kept in the report with
// feasible = false.
inline std::vector<CvPoint> cv_curve(const DesignSeries& series, const KernelSpec& spec,
                                     const CvConfig& cfg) {
    const std::vector<double> grid = cfg.h_grid.empty() ? default_h_grid(series.size()) : cfg.h_grid;
    if (grid.empty()) throw InvalidParamsError("empty bandwidth grid");
    for (size_t k = 0; k + 1 < grid.size(); ++k)
        if (!(grid[k] < grid[k + 1])) throw InvalidParamsError("bandwidth grid must be sorted ascending");
    std::vector<CvPoint> out;
    out.reserve(grid.size());
    for (const double h : grid) {
        CvPoint p;
        p.h = h;
        try {
            p.score = cv_score(series, spec, h, cfg);
            p.feasible = true;
        } catch (const InfeasibleBandwidthError&) {
            p.feasible = false;
        }
        out.push_back(p);
    }
    return out;
}

// argmin of the CV curve; ties break toward the larger bandwidth.
inline double select_bandwidth(const DesignSeries& series, const KernelSpec& spec,
                               const CvConfig& cfg) {
    const std::vector<CvPoint> curve = cv_curve(series, spec, cfg);
    double best_h = 0.0, best_score = 0.0;
    bool found = false;
    for (const CvPoint& p : curve) {
        if (!p.feasible) continue;
        if (!found || p.score <= best_score) {
            best_h = p.h;
            best_score = p.score;
            found = true;
        }
    }
    if (!found) throw NoFeasibleBandwidthError("every candidate bandwidth was infeasible");
    return best_h;
}

}  // namespace tvreg
