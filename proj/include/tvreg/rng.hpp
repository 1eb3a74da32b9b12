#pragma once

#include <cmath>
#include <cstdint>

#include "tvreg/error.hpp"

namespace tvreg {

namespace detail {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix64(std::uint64_t v) {
    return splitmix64_next(v);
}

}  // namespace detail

// Small self-contained generator (splitmix64 core) so simulations are
// bit-reproducible across platforms, runs and thread counts. Independent
// streams are derived from a base seed plus a stream index, which lets
// replications run in parallel without sharing state.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(detail::mix64(seed + 0x632BE59BD9B4E019ULL)) {}

    static Rng stream(std::uint64_t base_seed, std::uint64_t stream_index) {
        return Rng(detail::mix64(base_seed) + (stream_index + 1) * 0x9E3779B97F4A7C15ULL);
    }

    std::uint64_t next_u64() { return detail::splitmix64_next(state_); }

    // Uniform on [0, 1) with 53 bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    // Standard normal via the polar method (spare value discarded so the
    // draw count per call is independent of history).
    double normal() {
        for (;;) {
            const double u = 2.0 * uniform01() - 1.0;
            const double v = 2.0 * uniform01() - 1.0;
            const double s = u * u + v * v;
            if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
        }
    }

    // Marsaglia-Tsang gamma sampler, shape > 0, unit scale.
    double gamma(double shape) {
        if (!(shape > 0.0)) throw InvalidParamsError("gamma shape must be positive");
        if (shape < 1.0) {
            const double g = gamma(shape + 1.0);
            return g * std::pow(uniform01_positive(), 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            const double z = normal();
            const double t = 1.0 + c * z;
            if (t <= 0.0) continue;
            const double v = t * t * t;
            const double u = uniform01_positive();
            if (std::log(u) < 0.5 * z * z + d - d * v + d * std::log(v)) return d * v;
        }
    }

    // Student-t with df degrees of freedom (df > 2 for finite variance).
    double student_t(double df) {
        if (!(df > 0.0)) throw InvalidParamsError("student-t df must be positive");
        const double z = normal();
        const double chi2 = 2.0 * gamma(0.5 * df);
        return z / std::sqrt(chi2 / df);
    }

private:
    double uniform01_positive() {
        double u;
        do {
            u = uniform01();
        } while (u <= 0.0);
        return u;
    }

    std::uint64_t state_;
};

}  // namespace tvreg
