#pragma once

#include <cmath>
#include <limits>

#include "tvreg/error.hpp"

namespace tvreg {

namespace detail {

// Regularized lower incomplete gamma P(a, x), series branch (x < a + 1).
inline double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int n = 0; n < 500; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16)
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw InternalError("incomplete gamma series failed to converge");
}

// Regularized upper incomplete gamma Q(a, x), continued fraction branch
// (modified Lentz).
inline double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double f = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16)
            return f * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw InternalError("incomplete gamma continued fraction failed to converge");
}

}  // namespace detail

// Regularized lower incomplete gamma P(a, x); relative error ~1e-14.
inline double gamma_p(double a, double x) {
    if (!(a > 0.0)) throw InvalidParamsError("gamma_p needs a > 0");
    if (x < 0.0) throw InvalidParamsError("gamma_p needs x >= 0");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return detail::gamma_p_series(a, x);
    return 1.0 - detail::gamma_q_cf(a, x);
}

// CDF of the chi-squared distribution with k degrees of freedom.
inline double chi_squared_cdf(double x, double k) {
    if (!(k > 0.0)) throw InvalidParamsError("chi-squared needs k > 0");
    if (x <= 0.0) return 0.0;
    return gamma_p(0.5 * k, 0.5 * x);
}

}  // namespace tvreg
