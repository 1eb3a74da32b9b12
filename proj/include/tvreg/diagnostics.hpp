#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <utility>
#include <vector>

#include "tvreg/nelder_mead.hpp"
#include "tvreg/special.hpp"

namespace tvreg {

// Sample autocorrelations rho_1..rho_max_lag (full-sample denominator, so
// |rho_k| <= 1).
inline std::vector<double> acf(const std::vector<double>& x, int max_lag) {
    const long T = static_cast<long>(x.size());
    if (max_lag < 1) throw InvalidParamsError("max_lag must be >= 1");
    if (T < max_lag + 2) throw InvalidParamsError("series too short for requested lags");
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(T);
    double denom = 0.0, sumsq = 0.0;
    for (const double v : x) {
        denom += (v - mean) * (v - mean);
        sumsq += v * v;
    }
    // relative floor catches constant series whose deviations are rounding dust
    if (denom <= 1e-20 * std::max(1.0, sumsq))
        throw DegenerateSeriesError("zero-variance series has no autocorrelations");
    std::vector<double> rho(static_cast<size_t>(max_lag));
    for (int k = 1; k <= max_lag; ++k) {
        double num = 0.0;
        for (long t = k; t < T; ++t)
            num += (x[static_cast<size_t>(t)] - mean) * (x[static_cast<size_t>(t - k)] - mean);
        rho[static_cast<size_t>(k - 1)] = num / denom;
    }
    return rho;
}

// Partial autocorrelations via the Durbin-Levinson recursion on the ACF.
inline std::vector<double> pacf(const std::vector<double>& x, int max_lag) {
    const std::vector<double> rho = acf(x, max_lag);
    std::vector<double> out(static_cast<size_t>(max_lag));
    std::vector<double> prev(static_cast<size_t>(max_lag) + 1, 0.0);
    std::vector<double> cur(static_cast<size_t>(max_lag) + 1, 0.0);
    prev[1] = rho[0];
    out[0] = rho[0];
    for (int k = 2; k <= max_lag; ++k) {
        double num = rho[static_cast<size_t>(k - 1)];
        double den = 1.0;
        for (int j = 1; j < k; ++j) {
            num -= prev[static_cast<size_t>(j)] * rho[static_cast<size_t>(k - j - 1)];
            den -= prev[static_cast<size_t>(j)] * rho[static_cast<size_t>(j - 1)];
        }
        const double alpha = num / den;
        out[static_cast<size_t>(k - 1)] = alpha;
        for (int j = 1; j < k; ++j)
            cur[static_cast<size_t>(j)] = prev[static_cast<size_t>(j)] - alpha * prev[static_cast<size_t>(k - j)];
        cur[static_cast<size_t>(k)] = alpha;
        std::swap(prev, cur);
    }
    return out;
}

struct LjungBoxRow {
    int lag = 0;
    double q = 0.0;
    double p_value = 1.0;
};

// Q_m = T (T+2) sum_{k<=m} rho_k^2 / (T-k), referred to chi-squared(m).
inline std::vector<LjungBoxRow> ljung_box(const std::vector<double>& x, const std::vector<int>& lags) {
    if (lags.empty()) return {};
    const int max_lag = *std::max_element(lags.begin(), lags.end());
    const long T = static_cast<long>(x.size());
    if (max_lag >= T / 2) throw InvalidParamsError("ljung-box lag must be below length/2");
    const std::vector<double> rho = acf(x, max_lag);
    std::vector<LjungBoxRow> out;
    out.reserve(lags.size());
    for (const int m : lags) {
        if (m < 1) throw InvalidParamsError("ljung-box lag must be >= 1");
        double q = 0.0;
        for (int k = 1; k <= m; ++k)
            q += rho[static_cast<size_t>(k - 1)] * rho[static_cast<size_t>(k - 1)] /
                 static_cast<double>(T - k);
        q *= static_cast<double>(T) * static_cast<double>(T + 2);
        LjungBoxRow row;
        row.lag = m;
        row.q = q;
        row.p_value = 1.0 - chi_squared_cdf(q, static_cast<double>(m));
        out.push_back(row);
    }
    return out;
}

namespace detail {

// Map unconstrained reals to a stationary (or invertible) coefficient vector
// through partial autocorrelations in (-1, 1).
inline std::vector<double> pacf_transform(const std::vector<double>& raw) {
    const size_t k = raw.size();
    std::vector<double> out(k), work(k);
    for (size_t i = 0; i < k; ++i) out[i] = work[i] = std::tanh(raw[i]);
    for (size_t j = 1; j < k; ++j) {
        const double a = out[j];
        for (size_t i = 0; i < j; ++i) work[i] -= a * out[j - i - 1];
        for (size_t i = 0; i < j; ++i) out[i] = work[i];
    }
    return out;
}

// Conditional sum of squares with zero-initialized pre-sample errors:
//   e_t = w_t - sum phi_i w_{t-i} - sum theta_j e_{t-j},  t = p+1..T.
inline double css_sum(const std::vector<double>& w, const std::vector<double>& phi,
                      const std::vector<double>& theta) {
    const long T = static_cast<long>(w.size());
    const long p = static_cast<long>(phi.size());
    const long q = static_cast<long>(theta.size());
    std::vector<double> e(static_cast<size_t>(T), 0.0);
    double ssq = 0.0;
    for (long t = p; t < T; ++t) {
        double r = w[static_cast<size_t>(t)];
        for (long i = 0; i < p; ++i) r -= phi[static_cast<size_t>(i)] * w[static_cast<size_t>(t - 1 - i)];
        for (long j = 0; j < q; ++j) {
            if (t - 1 - j >= p) r -= theta[static_cast<size_t>(j)] * e[static_cast<size_t>(t - 1 - j)];
        }
        e[static_cast<size_t>(t)] = r;
        ssq += r * r;
    }
    return ssq;
}

inline double css_bic(double ssq, long T, int p, int q) {
    const double n_eff = static_cast<double>(T - p);
    const double sigma2 = ssq / n_eff;
    const double loglik = -0.5 * n_eff * (std::log(2.0 * std::numbers::pi * sigma2) + 1.0);
    return -2.0 * loglik + static_cast<double>(p + q + 1) * std::log(static_cast<double>(T));
}

}  // namespace detail

struct ArmaFit {
    int p = 0, q = 0;
    std::vector<double> ar, ma;
    double mean = 0.0;
    double sigma2 = 0.0;
    double loglik = 0.0;
    double bic = 0.0;
};

// Gaussian conditional-sum-of-squares ARMA(p, q) fit on the demeaned series.
// Stationarity and invertibility are enforced by optimizing in the partial
// autocorrelation parameterization, which keeps the simplex unconstrained.
// max_iter <= 0 uses the optimizer default.
inline ArmaFit fit_arma_css(const std::vector<double>& x, int p, int q, int max_iter = 0) {
    if (p < 0 || p > 4 || q < 0 || q > 4) throw InvalidParamsError("arma orders supported in 0..4");
    const long T = static_cast<long>(x.size());
    if (T < 20 * (p + q + 1)) throw InvalidParamsError("series too short for requested arma order");

    ArmaFit fit;
    fit.p = p;
    fit.q = q;
    fit.mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(T);
    std::vector<double> w(x.size());
    for (size_t i = 0; i < x.size(); ++i) w[i] = x[i] - fit.mean;

    double ssq;
    if (p + q == 0) {
        ssq = detail::css_sum(w, {}, {});
    } else {
        auto objective = [&](const std::vector<double>& raw) {
            const std::vector<double> ar(raw.begin(), raw.begin() + p);
            const std::vector<double> ma(raw.begin() + p, raw.end());
            return detail::css_sum(w, detail::pacf_transform(ar), detail::pacf_transform(ma));
        };
        SimplexResult res;
        if (max_iter > 0) {
            res = nelder_mead(objective, std::vector<double>(static_cast<size_t>(p + q), 0.0), 0.5,
                              1e-10, max_iter);
        } else {
            // overparameterized fits can crawl along a root-cancellation
            // ridge; restart with a fresh simplex from the best point
            std::vector<double> start(static_cast<size_t>(p + q), 0.0);
            for (int round = 0; round < 6; ++round) {
                res = nelder_mead(objective, start, 0.5, 1e-10, 800 * (p + q));
                if (res.converged) break;
                start = res.x;
            }
        }
        if (!res.converged)
            throw ConvergenceError("arma css optimization ran out of budget", res.x, res.value);
        const std::vector<double> ar_raw(res.x.begin(), res.x.begin() + p);
        const std::vector<double> ma_raw(res.x.begin() + p, res.x.end());
        fit.ar = detail::pacf_transform(ar_raw);
        fit.ma = detail::pacf_transform(ma_raw);
        ssq = res.value;
    }

    const double n_eff = static_cast<double>(T - p);
    fit.sigma2 = ssq / n_eff;
    fit.loglik = -0.5 * n_eff * (std::log(2.0 * std::numbers::pi * fit.sigma2) + 1.0);
    fit.bic = detail::css_bic(ssq, T, p, q);
    return fit;
}

struct ArmaOrder {
    int p = 0, q = 0;
};

struct ArmaGrid {
    std::vector<std::vector<double>> bic;  // bic[p][q]
    ArmaOrder best;
};

// BIC over all (p, q) in 0..max_p x 0..max_q; ties prefer smaller p+q, then
// smaller p. A cell whose optimizer runs out of budget contributes the BIC of
// its best iterate, which upper-bounds the converged value.
inline ArmaGrid arma_bic_grid(const std::vector<double>& x, int max_p = 4, int max_q = 4) {
    ArmaGrid grid;
    grid.bic.assign(static_cast<size_t>(max_p) + 1,
                    std::vector<double>(static_cast<size_t>(max_q) + 1, 0.0));
    double best_bic = std::numeric_limits<double>::infinity();
    for (int p = 0; p <= max_p; ++p) {
        for (int q = 0; q <= max_q; ++q) {
            double bic;
            try {
                bic = fit_arma_css(x, p, q).bic;
            } catch (const ConvergenceError& e) {
                bic = detail::css_bic(e.best_value(), static_cast<long>(x.size()), p, q);
            }
            grid.bic[static_cast<size_t>(p)][static_cast<size_t>(q)] = bic;
            const bool better =
                bic < best_bic ||
                (bic == best_bic && (p + q < grid.best.p + grid.best.q ||
                                     (p + q == grid.best.p + grid.best.q && p < grid.best.p)));
            if (better) {
                best_bic = bic;
                grid.best = {p, q};
            }
        }
    }
    return grid;
}

struct DiagnosticsReport {
    std::vector<double> acf;   // lags 1..L
    std::vector<double> pacf;  // lags 1..L
    double bartlett_band = 0.0;
    std::vector<LjungBoxRow> ljung_box;
    std::vector<std::vector<double>> bic_grid;  // empty when not requested
    ArmaOrder best_order;
};

inline DiagnosticsReport diagnose(const std::vector<double>& x, int max_lag,
                                  const std::vector<int>& lb_lags, bool with_bic_grid) {
    DiagnosticsReport rep;
    rep.acf = acf(x, max_lag);
    rep.pacf = pacf(x, max_lag);
    rep.bartlett_band = 1.96 / std::sqrt(static_cast<double>(x.size()));
    rep.ljung_box = ljung_box(x, lb_lags);
    if (with_bic_grid) {
        const ArmaGrid grid = arma_bic_grid(x);
        rep.bic_grid = grid.bic;
        rep.best_order = grid.best;
    }
    return rep;
}

}  // namespace tvreg
