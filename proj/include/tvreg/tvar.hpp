#pragma once

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "tvreg/local_linear.hpp"
#include "tvreg/rng.hpp"

namespace tvreg {

enum class Innovation { Gaussian, Uniform, StudentT };

// Y_t = g(t/T) + V_t with V_t = phi(t/T) V_{t-1} + e_t. Both coefficient
// functions live on [0, 1]; |phi| must stay strictly below one. Innovations
// are standardized to unit variance before scaling by sigma_e, so sigma_e^2
// is the innovation variance for every distribution choice; asymptotic
// statements elsewhere assume the standardized case.
struct TvarModel {
    std::function<double(double)> trend;
    std::function<double(double)> ar_coef;
    double sigma_e = 1.0;
    double phi_bound = 0.99;
    Innovation innovation = Innovation::Gaussian;
    double student_df = 6.0;  // used when innovation == StudentT; needs df > 4

    void validate() const {
        if (!trend || !ar_coef) throw InvalidParamsError("model needs trend and ar_coef functions");
        if (!(sigma_e >= 0.0)) throw InvalidParamsError("sigma_e must be nonnegative");
        if (!(phi_bound > 0.0 && phi_bound < 1.0))
            throw InvalidParamsError("phi_bound must lie in (0, 1)");
        if (innovation == Innovation::StudentT && !(student_df > 4.0))
            throw InvalidParamsError("student-t innovations need df > 4");
        const int n = 10000;
        for (int k = 0; k <= n; ++k) {
            const double u = static_cast<double>(k) / n;
            if (std::abs(ar_coef(u)) > phi_bound)
                throw InvalidParamsError("|ar_coef| exceeds phi_bound at u=" + std::to_string(u));
        }
    }
};

namespace detail {

// Zero-mean, unit-variance innovation; scaled by sigma_e at the call site.
inline double draw_innovation(Rng& rng, Innovation kind, double student_df) {
    switch (kind) {
        case Innovation::Gaussian: return rng.normal();
        case Innovation::Uniform: return rng.uniform(-std::sqrt(3.0), std::sqrt(3.0));
        case Innovation::StudentT:
            return rng.student_t(student_df) * std::sqrt((student_df - 2.0) / student_df);
    }
    return 0.0;
}

}  // namespace detail

// Simulate the model at sample size T. V_0 is drawn from the Gaussian
// stationary law N(0, sigma_e^2 / (1 - phi(0)^2)), independent of the
// innovations. Deterministic given (seed, T).
inline DesignSeries simulate(const TvarModel& model, long T, std::uint64_t seed) {
    if (T < 2) throw InvalidParamsError("need T >= 2");
    model.validate();
    Rng rng(seed);
    const double phi0 = model.ar_coef(0.0);
    double v = model.sigma_e == 0.0
                   ? 0.0
                   : rng.normal() * model.sigma_e / std::sqrt(1.0 - phi0 * phi0);
    std::vector<double> y(static_cast<size_t>(T));
    for (long t = 1; t <= T; ++t) {
        const double u = static_cast<double>(t) / static_cast<double>(T);
        const double e = model.sigma_e * detail::draw_innovation(rng, model.innovation, model.student_df);
        v = model.ar_coef(u) * v + e;
        y[static_cast<size_t>(t - 1)] = model.trend(u) + v;
    }
    return DesignSeries(std::move(y));
}

// Local constant (ratio) estimator of the autoregressive function from
// first-step residuals:
//   phi_hat(x) = sum_{t>=2} G_v(t/T - x) V_t V_{t-1} / sum_{t>=2} G_v(t/T - x) V_{t-1}^2.
// Grid points must stay an interior margin away from both endpoints.
inline CurveEstimate fit_local_constant_phi(const std::vector<double>& v_hat, const KernelSpec& spec,
                                            double v_bw, const std::vector<double>& grid) {
    if (!(v_bw > 0.0 && v_bw < 0.5)) throw InvalidBandwidthError("bandwidth must lie in (0, 1/2)");
    const long T = static_cast<long>(v_hat.size());
    if (T < 3) throw InvalidParamsError("need at least 3 residuals");

    CurveEstimate fit;
    fit.grid = grid;
    fit.bandwidth = v_bw;
    fit.values.resize(grid.size());
    fit.interior.assign(grid.size(), true);
    fit.lambda_floor = std::numeric_limits<double>::infinity();

    for (size_t k = 0; k < grid.size(); ++k) {
        const double x = grid[k];
        if (!(x >= 0.0 && x <= 1.0)) throw InvalidParamsError("grid point outside [0, 1]");
        const IndexRange win = support_indices(T, x, v_bw);
        double num = 0.0, den = 0.0;
        for (long t = std::max(win.first, 2L); t <= win.last; ++t) {
            const double gv = eval(spec, (static_cast<double>(t) / static_cast<double>(T) - x) / v_bw);
            const double prev = v_hat[static_cast<size_t>(t - 2)];
            num += gv * v_hat[static_cast<size_t>(t - 1)] * prev;
            den += gv * prev * prev;
        }
        const double norm = static_cast<double>(T) * v_bw;
        num /= norm;
        den /= norm;
        if (den < 1e-10)
            throw DegenerateDenominatorError("degenerate local-constant denominator (all-zero residuals in window?)", x);
        fit.values[k] = num / den;
        if (den < fit.lambda_floor) fit.lambda_floor = den;
    }
    return fit;
}

// Output of the two-step procedure: trend fit on the design grid, residuals,
// autoregressive fit on the interior grid, and innovation residuals.
struct TwoStepFit {
    CurveEstimate g_hat;               // on {t/T}
    std::vector<double> residuals_v;   // V_t = Y_t - g_hat(t/T), length T
    CurveEstimate phi_hat;             // on design points inside [b, 1-b]
    std::vector<double> residuals_e;   // e_t = V_t - phi_hat(t/T) V_{t-1}, length T-1
    double h = 0.0;
    double v_bw = 0.0;
    double interior_margin = 0.0;
    // True when residuals_e used the nearest interior phi value outside the
    // interior set.
    bool phi_clamped_outside = false;
};

// Default step-2 bandwidth: proportional to h but capped so the interior
// margin 2*v stays below 1/2.
inline double default_step2_bandwidth(double h, double c_v = 1.0) {
    return std::min(c_v * h, 0.2);
}

// Step 1 (local linear trend) + step 2 (local constant AR coefficient on the
// interior), with innovation residuals assembled from the nearest interior
// phi value outside [b, 1-b].
inline TwoStepFit fit_two_step(const DesignSeries& series, const KernelSpec& spec_k,
                               const KernelSpec& spec_g, double h, double v_bw, double b) {
    if (!(v_bw > 0.0 && v_bw <= b && b < 0.5))
        throw InvalidBandwidthError("need 0 < v <= b < 1/2 for the interior margin");
    const long T = series.size();

    TwoStepFit out;
    out.h = h;
    out.v_bw = v_bw;
    out.interior_margin = b;

    const std::vector<double> dgrid = design_grid(T);
    out.g_hat = fit_local_linear(series, spec_k, h, dgrid);

    out.residuals_v.resize(static_cast<size_t>(T));
    for (long t = 0; t < T; ++t)
        out.residuals_v[static_cast<size_t>(t)] =
            series.values[static_cast<size_t>(t)] - out.g_hat.values[static_cast<size_t>(t)];

    std::vector<double> interior;
    interior.reserve(static_cast<size_t>(T));
    for (const double x : dgrid)
        if (x >= b && x <= 1.0 - b) interior.push_back(x);
    if (interior.size() < 2) throw InvalidParamsError("interior set has fewer than 2 design points");

    out.phi_hat = fit_local_constant_phi(out.residuals_v, spec_g, v_bw, interior);

    const double lo = interior.front();
    const double hi = interior.back();
    out.residuals_e.resize(static_cast<size_t>(T - 1));
    for (long t = 2; t <= T; ++t) {
        const double x = static_cast<double>(t) / static_cast<double>(T);
        double phi_x;
        if (x < lo) {
            phi_x = out.phi_hat.values.front();
            out.phi_clamped_outside = true;
        } else if (x > hi) {
            phi_x = out.phi_hat.values.back();
            out.phi_clamped_outside = true;
        } else {
            phi_x = out.phi_hat.value_at(x);
        }
        out.residuals_e[static_cast<size_t>(t - 2)] =
            out.residuals_v[static_cast<size_t>(t - 1)] - phi_x * out.residuals_v[static_cast<size_t>(t - 2)];
    }
    return out;
}

}  // namespace tvreg
