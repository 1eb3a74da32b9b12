#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "tvreg/error.hpp"

namespace tvreg {

// Compactly supported kernels, all normalized to support [-1, 1] and unit
// integral. Uniform is carried for completeness but is not Lipschitz.
enum class KernelFamily { Epanechnikov, Triangular, Biweight, Triweight, Uniform };

struct KernelSpec {
    KernelFamily family = KernelFamily::Epanechnikov;
    double bound = 0.75;          // sup |K|
    double support_radius = 1.0;  // K(u) = 0 for |u| > support_radius
    double lipschitz = 1.5;       // +inf for Uniform
    bool symmetric = true;
    bool nonnegative = true;
};

inline KernelSpec make_kernel(KernelFamily family) {
    KernelSpec k;
    k.family = family;
    switch (family) {
        case KernelFamily::Epanechnikov:
            k.bound = 0.75;
            k.lipschitz = 1.5;
            break;
        case KernelFamily::Triangular:
            k.bound = 1.0;
            k.lipschitz = 1.0;
            break;
        case KernelFamily::Biweight:
            k.bound = 15.0 / 16.0;
            // max |K'| = (15/4) * max u(1-u^2) attained at u = 1/sqrt(3)
            k.lipschitz = (15.0 / 4.0) * (2.0 / (3.0 * std::sqrt(3.0)));
            break;
        case KernelFamily::Triweight:
            k.bound = 35.0 / 32.0;
            // max |K'| = (105/16) * max u(1-u^2)^2 attained at u = 1/sqrt(5)
            k.lipschitz = (105.0 / 16.0) * (16.0 / (25.0 * std::sqrt(5.0)));
            break;
        case KernelFamily::Uniform:
            k.bound = 0.5;
            k.lipschitz = std::numeric_limits<double>::infinity();
            break;
    }
    return k;
}

inline KernelSpec epanechnikov() { return make_kernel(KernelFamily::Epanechnikov); }

inline const char* kernel_name(KernelFamily family) {
    switch (family) {
        case KernelFamily::Epanechnikov: return "epanechnikov";
        case KernelFamily::Triangular: return "triangular";
        case KernelFamily::Biweight: return "biweight";
        case KernelFamily::Triweight: return "triweight";
        case KernelFamily::Uniform: return "uniform";
    }
    return "?";
}

inline KernelFamily kernel_from_name(const std::string& name) {
    if (name == "epanechnikov") return KernelFamily::Epanechnikov;
    if (name == "triangular") return KernelFamily::Triangular;
    if (name == "biweight") return KernelFamily::Biweight;
    if (name == "triweight") return KernelFamily::Triweight;
    if (name == "uniform") return KernelFamily::Uniform;
    throw InvalidParamsError("unknown kernel family: " + name);
}

// K(u); exactly zero (not merely tiny) outside the support.
inline double eval(const KernelSpec& spec, double u) {
    const double a = std::abs(u);
    if (a > spec.support_radius) return 0.0;
    switch (spec.family) {
        case KernelFamily::Epanechnikov: return 0.75 * (1.0 - u * u);
        case KernelFamily::Triangular: return 1.0 - a;
        case KernelFamily::Biweight: {
            const double t = 1.0 - u * u;
            return (15.0 / 16.0) * t * t;
        }
        case KernelFamily::Triweight: {
            const double t = 1.0 - u * u;
            return (35.0 / 32.0) * t * t * t;
        }
        case KernelFamily::Uniform: return 0.5;
    }
    return 0.0;
}

// K_h(u) = K(u/h)/h.
inline double eval_scaled(const KernelSpec& spec, double u, double h) {
    if (!(h > 0.0)) throw InvalidBandwidthError("bandwidth must be positive, got " + std::to_string(h));
    return eval(spec, u / h) / h;
}

// 1-based inclusive index range {first..last} within {1..T}.
struct IndexRange {
    long first = 1;
    long last = 0;
    long count() const noexcept { return last >= first ? last - first + 1 : 0; }
    bool empty() const noexcept { return last < first; }
};

// All i in {1..T} with |i/T - x| <= L*h. Nonempty whenever T*L*h > 1.
inline IndexRange support_indices(long T, double x, double h, double L = 1.0) {
    if (!(h > 0.0)) throw InvalidBandwidthError("bandwidth must be positive, got " + std::to_string(h));
    if (!(L >= 1.0)) throw InvalidParamsError("support multiple L must be >= 1");
    if (!(x >= 0.0 && x <= 1.0)) throw InvalidParamsError("evaluation point must lie in [0, 1]");
    if (!(static_cast<double>(T) * L * h > 1.0))
        throw InvalidParamsError("window too narrow: requires T*L*h > 1");

    const double lo = static_cast<double>(T) * (x - L * h);
    const double hi = static_cast<double>(T) * (x + L * h);
    // Nudge so design points landing exactly on the window edge stay included
    // despite rounding of i/T.
    const double tol_lo = 1e-9 * std::max(1.0, std::abs(lo));
    const double tol_hi = 1e-9 * std::max(1.0, std::abs(hi));
    IndexRange r;
    r.first = std::max(1L, static_cast<long>(std::ceil(lo - tol_lo)));
    r.last = std::min(T, static_cast<long>(std::floor(hi + tol_hi)));
    if (r.empty()) throw InternalError("support window is empty despite T*L*h > 1");
    return r;
}

enum class MomentRegion { Interior, LeftBoundary, RightBoundary };

namespace detail {

// K(u) = P(|u|) with P a polynomial; coefficients in ascending powers.
struct KernelPoly {
    std::array<double, 7> c{};
    int degree = 0;
};

inline KernelPoly kernel_poly(KernelFamily family) {
    KernelPoly p;
    switch (family) {
        case KernelFamily::Epanechnikov:
            p.c = {0.75, 0.0, -0.75, 0, 0, 0, 0};
            p.degree = 2;
            break;
        case KernelFamily::Triangular:
            p.c = {1.0, -1.0, 0, 0, 0, 0, 0};
            p.degree = 1;
            break;
        case KernelFamily::Biweight:
            p.c = {15.0 / 16.0, 0.0, -15.0 / 8.0, 0.0, 15.0 / 16.0, 0, 0};
            p.degree = 4;
            break;
        case KernelFamily::Triweight:
            p.c = {35.0 / 32.0, 0.0, -105.0 / 32.0, 0.0, 105.0 / 32.0, 0.0, -35.0 / 32.0};
            p.degree = 6;
            break;
        case KernelFamily::Uniform:
            p.c = {0.5, 0, 0, 0, 0, 0, 0};
            p.degree = 0;
            break;
    }
    return p;
}

// int_0^w u^j P(u) du for w in [0, 1].
inline double upper_partial_moment(KernelFamily family, int j, double w) {
    const KernelPoly p = kernel_poly(family);
    double acc = 0.0;
    double wpow = std::pow(w, j + 1);
    for (int k = 0; k <= p.degree; ++k) {
        acc += p.c[static_cast<size_t>(k)] * wpow / static_cast<double>(j + k + 1);
        wpow *= w;
    }
    return acc;
}

// H(w) = int_0^w u^j K(u) du for w in [-1, 1].
inline double signed_partial_moment(KernelFamily family, int j, double w) {
    if (w >= 0.0) return upper_partial_moment(family, j, w);
    const double m = upper_partial_moment(family, j, -w);
    return (j % 2 == 0) ? -m : m;
}

}  // namespace detail

// Closed-form int_a^b u^j K(u) du (the integrand vanishes outside [-1, 1]).
inline double partial_moment(const KernelSpec& spec, int j, double a, double b) {
    if (j < 0) throw InvalidParamsError("moment order must be nonnegative");
    a = std::clamp(a, -1.0, 1.0);
    b = std::clamp(b, -1.0, 1.0);
    if (b <= a) return 0.0;
    return detail::signed_partial_moment(spec.family, j, b) -
           detail::signed_partial_moment(spec.family, j, a);
}

// mu_j over the full support, the right half, or the left half.
inline double analytic_moment(const KernelSpec& spec, int j, MomentRegion region) {
    if (j < 0 || j > 4) throw NotImplementedError("kernel moments implemented for j in 0..4");
    switch (region) {
        case MomentRegion::Interior: return partial_moment(spec, j, -1.0, 1.0);
        case MomentRegion::LeftBoundary: return partial_moment(spec, j, 0.0, 1.0);
        case MomentRegion::RightBoundary: return partial_moment(spec, j, -1.0, 0.0);
    }
    return 0.0;
}

namespace detail {

inline double int_pow(double base, int exp) {
    double r = 1.0;
    for (int k = 0; k < exp; ++k) r *= base;
    return r;
}

}  // namespace detail

// | (1/T) sum_i K(pi_i) pi_i^j  -  int_0^1 K((u-x)/h) ((u-x)/h)^j du |
// with pi_i = (i/T - x)/h; the integral comes from the closed-form
// antiderivative truncated at support and [0, 1].
inline double riemann_gap(const KernelSpec& spec, long T, double x, double h, int j) {
    if (!(h > 0.0 && h < 0.5)) throw InvalidBandwidthError("bandwidth must lie in (0, 1/2)");
    if (!(static_cast<double>(T) * h > 1.0)) throw InvalidParamsError("requires T*h > 1");
    const IndexRange win = support_indices(T, x, h);
    double sum = 0.0;
    for (long i = win.first; i <= win.last; ++i) {
        const double pi = (static_cast<double>(i) / static_cast<double>(T) - x) / h;
        sum += eval(spec, pi) * detail::int_pow(pi, j);
    }
    sum /= static_cast<double>(T);
    const double integral = h * partial_moment(spec, j, -x / h, (1.0 - x) / h);
    return std::abs(sum - integral);
}

}  // namespace tvreg
