#pragma once

#include <algorithm>
#include <limits>
#include <vector>

#include "tvreg/kernel_averages.hpp"

namespace tvreg {

// A fitted curve on an explicit evaluation grid.
struct CurveEstimate {
    std::vector<double> grid;
    std::vector<double> values;
    double bandwidth = 0.0;
    // Smallest design-matrix eigenvalue seen over the grid (local linear), or
    // the smallest denominator seen (local constant). Positive after a fit.
    double lambda_floor = 0.0;
    // grid[k] is at least one bandwidth away from both endpoints.
    std::vector<bool> interior;

    // Value at the grid point nearest to x (grids are sorted ascending).
    double value_at(double x) const {
        const auto it = std::lower_bound(grid.begin(), grid.end(), x);
        size_t k = static_cast<size_t>(it - grid.begin());
        if (k == grid.size()) return values.back();
        if (k > 0 && x - grid[k - 1] <= grid[k] - x) --k;
        return values[k];
    }
};

// Local linear estimate g_hat(x) = e1' S^{-1} D at every grid point.
// The 2x2 systems are solved in closed form; a determinant below 1e-12
// raises SingularDesignError naming the offending x.
inline CurveEstimate fit_local_linear(const DesignSeries& series, const KernelSpec& spec, double h,
                                      const std::vector<double>& grid) {
    if (!(h > 0.0 && h < 0.5)) throw InvalidBandwidthError("bandwidth must lie in (0, 1/2)");
    const long T = series.size();
    if (!(static_cast<double>(T) * h > 2.0)) throw InvalidBandwidthError("requires T*h > 2");

    CurveEstimate fit;
    fit.grid = grid;
    fit.bandwidth = h;
    fit.values.resize(grid.size());
    fit.interior.resize(grid.size());
    fit.lambda_floor = std::numeric_limits<double>::infinity();

    for (size_t k = 0; k < grid.size(); ++k) {
        const double x = grid[k];
        if (!(x >= 0.0 && x <= 1.0)) throw InvalidParamsError("grid point outside [0, 1]");
        const IndexRange win = support_indices(T, x, h);
        double a0 = 0.0, a1 = 0.0, a2 = 0.0, d0 = 0.0, d1 = 0.0;
        for (long i = win.first; i <= win.last; ++i) {
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
        MomentMatrix m;
        m.x = x;
        m.h = h;
        m.s0 = a0 / norm;
        m.s1 = a1 / norm;
        m.s2 = a2 / norm;
        fit.values[k] = m.solve(d0 / norm, d1 / norm).first;
        const double lmin = m.lambda_min();
        if (lmin < fit.lambda_floor) fit.lambda_floor = lmin;
        fit.interior[k] = (x >= h && x <= 1.0 - h);
    }
    return fit;
}

// Effective weights of the local linear estimator:
//   W_t(x) = (1/T) e1' S^{-1} (1, pi_t)' K_h(t/T - x).
// They sum to one and have vanishing first design moment.
inline std::vector<double> weights(const KernelSpec& spec, long T, double x, double h) {
    const MomentMatrix m = moment_matrix(spec, T, x, h);
    const double d = m.det();
    if (std::abs(d) < 1e-12)
        throw SingularDesignError("singular design matrix (bandwidth too small for T?)", x);
    std::vector<double> w(static_cast<size_t>(T), 0.0);
    const IndexRange win = support_indices(T, x, h);
    const double norm = static_cast<double>(T) * h;
    for (long i = win.first; i <= win.last; ++i) {
        const double pi = (static_cast<double>(i) / static_cast<double>(T) - x) / h;
        const double kv = eval(spec, pi);
        w[static_cast<size_t>(i - 1)] = (m.s2 - m.s1 * pi) / d * kv / norm;
    }
    return w;
}

// min over the grid of the smallest eigenvalue of the design matrix.
inline double eigen_floor(const KernelSpec& spec, long T, double h, const std::vector<double>& grid) {
    double floor_val = std::numeric_limits<double>::infinity();
    for (const double x : grid) {
        const double lmin = moment_matrix(spec, T, x, h).lambda_min();
        if (lmin < floor_val) floor_val = lmin;
    }
    return floor_val;
}

}  // namespace tvreg
