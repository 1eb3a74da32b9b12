#pragma once

#include <cmath>
#include <utility>

#include "tvreg/kernels.hpp"
#include "tvreg/series.hpp"

namespace tvreg {

namespace detail {

inline void check_eval_point(double x, double h, int j) {
    if (!(h > 0.0 && h < 0.5)) throw InvalidBandwidthError("bandwidth must lie in (0, 1/2)");
    if (!(x >= 0.0 && x <= 1.0)) throw InvalidParamsError("evaluation point must lie in [0, 1]");
    if (j < 0 || j > 4) throw InvalidParamsError("polynomial order j must lie in 0..4");
}

}  // namespace detail

// Kernel average  (1/T) sum_i eps_i K_h(i/T - x) ((i/T - x)/h)^j,
// summed over the kernel support only.
inline double psi_hat(const DesignSeries& series, const KernelSpec& spec, double x, double h, int j) {
    detail::check_eval_point(x, h, j);
    const long T = series.size();
    const IndexRange win = support_indices(T, x, h);
    double acc = 0.0;
    for (long i = win.first; i <= win.last; ++i) {
        const double pi = (static_cast<double>(i) / static_cast<double>(T) - x) / h;
        acc += series.values[static_cast<size_t>(i - 1)] * eval(spec, pi) * detail::int_pow(pi, j);
    }
    return acc / (static_cast<double>(T) * h);
}

// Design moment  s_{T,j}(x) = (1/(Th)) sum_t ((t/T - x)/h)^j K((t/T - x)/h).
// Converges to the support-truncated moment integral at rate O(1/(Th)).
inline double design_moment(const KernelSpec& spec, long T, double x, double h, int j) {
    detail::check_eval_point(x, h, j);
    const IndexRange win = support_indices(T, x, h);
    double acc = 0.0;
    for (long i = win.first; i <= win.last; ++i) {
        const double pi = (static_cast<double>(i) / static_cast<double>(T) - x) / h;
        acc += eval(spec, pi) * detail::int_pow(pi, j);
    }
    return acc / (static_cast<double>(T) * h);
}

// Limit of design_moment: the moment integral truncated at the support
// intersected with the unit interval.
inline double design_moment_limit(const KernelSpec& spec, double x, double h, int j) {
    return partial_moment(spec, j, -x / h, (1.0 - x) / h);
}

// The symmetric 2x2 design matrix of the local linear fit,
//   [[s0, s1], [s1, s2]],  s_j = (1/T) sum_t K_h(t/T - x) ((t/T - x)/h)^j.
struct MomentMatrix {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    double x = 0.0, h = 0.0;

    double det() const noexcept { return s0 * s2 - s1 * s1; }
    double trace() const noexcept { return s0 + s2; }

    double lambda_min() const noexcept {
        const double half_gap = 0.5 * std::sqrt((s0 - s2) * (s0 - s2) + 4.0 * s1 * s1);
        return 0.5 * trace() - half_gap;
    }
    double lambda_max() const noexcept {
        const double half_gap = 0.5 * std::sqrt((s0 - s2) * (s0 - s2) + 4.0 * s1 * s1);
        return 0.5 * trace() + half_gap;
    }

    // Solve [[s0,s1],[s1,s2]] z = b by the adjugate formula.
    std::pair<double, double> solve(double b0, double b1) const {
        const double d = det();
        if (std::abs(d) < 1e-12)
            throw SingularDesignError("singular design matrix (bandwidth too small for T?)", x);
        return {(s2 * b0 - s1 * b1) / d, (s0 * b1 - s1 * b0) / d};
    }
};

inline MomentMatrix moment_matrix(const KernelSpec& spec, long T, double x, double h) {
    detail::check_eval_point(x, h, 0);
    const IndexRange win = support_indices(T, x, h);
    MomentMatrix m;
    m.x = x;
    m.h = h;
    double a0 = 0.0, a1 = 0.0, a2 = 0.0;
    for (long i = win.first; i <= win.last; ++i) {
        const double pi = (static_cast<double>(i) / static_cast<double>(T) - x) / h;
        const double kv = eval(spec, pi);
        a0 += kv;
        a1 += kv * pi;
        a2 += kv * pi * pi;
    }
    const double norm = static_cast<double>(T) * h;
    m.s0 = a0 / norm;
    m.s1 = a1 / norm;
    m.s2 = a2 / norm;
    return m;
}

// The response-weighted pair ( (1/T) sum Y K_h, (1/T) sum Y K_h pi ).
inline std::pair<double, double> data_vector(const DesignSeries& series, const KernelSpec& spec,
                                             double x, double h) {
    detail::check_eval_point(x, h, 0);
    const long T = series.size();
    const IndexRange win = support_indices(T, x, h);
    double d0 = 0.0, d1 = 0.0;
    for (long i = win.first; i <= win.last; ++i) {
        const double pi = (static_cast<double>(i) / static_cast<double>(T) - x) / h;
        const double w = series.values[static_cast<size_t>(i - 1)] * eval(spec, pi);
        d0 += w;
        d1 += w * pi;
    }
    const double norm = static_cast<double>(T) * h;
    return {d0 / norm, d1 / norm};
}

}  // namespace tvreg
