#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "tvreg/error.hpp"

namespace tvreg {

struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Derivative-free Nelder-Mead minimizer with the standard reflection /
// expansion / contraction / shrink coefficients. Fully deterministic: the
// initial simplex is x0 plus one step along each coordinate, and ties in the
// vertex ordering are broken by index.
inline SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                 std::vector<double> x0, double step = 0.5, double tol = 1e-10,
                                 int max_iter = 0) {
    const size_t n = x0.size();
    if (n == 0) throw InvalidParamsError("nelder_mead needs at least one dimension");
    if (max_iter <= 0) max_iter = 400 * static_cast<int>(n);

    std::vector<std::vector<double>> pts(n + 1, x0);
    for (size_t i = 0; i < n; ++i) pts[i + 1][i] += step;
    std::vector<double> fv(n + 1);
    for (size_t i = 0; i <= n; ++i) fv[i] = f(pts[i]);

    std::vector<size_t> order(n + 1);
    SimplexResult res;
    for (int iter = 0; iter < max_iter; ++iter) {
        std::iota(order.begin(), order.end(), size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return fv[a] < fv[b]; });
        const size_t best = order[0], worst = order[n], second_worst = order[n - 1];

        res.iterations = iter;
        const double fspread = std::abs(fv[worst] - fv[best]);
        double xspread = 0.0;
        for (size_t i = 0; i < n; ++i)
            xspread = std::max(xspread, std::abs(pts[worst][i] - pts[best][i]));
        if (fspread <= tol * (std::abs(fv[best]) + tol) || xspread <= 1e-9) {
            res.x = pts[best];
            res.value = fv[best];
            res.converged = true;
            return res;
        }

        std::vector<double> centroid(n, 0.0);
        for (size_t i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (size_t k = 0; k < n; ++k) centroid[k] += pts[i][k];
        }
        for (size_t k = 0; k < n; ++k) centroid[k] /= static_cast<double>(n);

        auto blend = [&](double coef) {
            std::vector<double> p(n);
            for (size_t k = 0; k < n; ++k) p[k] = centroid[k] + coef * (pts[worst][k] - centroid[k]);
            return p;
        };

        const std::vector<double> refl = blend(-1.0);
        const double f_refl = f(refl);
        if (f_refl < fv[best]) {
            const std::vector<double> expa = blend(-2.0);
            const double f_expa = f(expa);
            if (f_expa < f_refl) {
                pts[worst] = expa;
                fv[worst] = f_expa;
            } else {
                pts[worst] = refl;
                fv[worst] = f_refl;
            }
            continue;
        }
        if (f_refl < fv[second_worst]) {
            pts[worst] = refl;
            fv[worst] = f_refl;
            continue;
        }
        const bool outside = f_refl < fv[worst];
        const std::vector<double> contr = blend(outside ? -0.5 : 0.5);
        const double f_contr = f(contr);
        if (f_contr < std::min(f_refl, fv[worst])) {
            pts[worst] = contr;
            fv[worst] = f_contr;
            continue;
        }
        // Shrink toward the best vertex.
        for (size_t i = 0; i <= n; ++i) {
            if (i == best) continue;
            for (size_t k = 0; k < n; ++k) pts[i][k] = pts[best][k] + 0.5 * (pts[i][k] - pts[best][k]);
            fv[i] = f(pts[i]);
        }
    }

    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return fv[a] < fv[b]; });
    res.x = pts[order[0]];
    res.value = fv[order[0]];
    res.converged = false;
    return res;
}

}  // namespace tvreg
