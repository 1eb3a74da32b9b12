#pragma once

#include <utility>
#include <vector>

#include "tvreg/error.hpp"

namespace tvreg {

// Observations bound to the equally spaced design x_i = i/T, i = 1..T.
// Storage is 0-based: values[k] sits at design point (k+1)/T.
struct DesignSeries {
    std::vector<double> values;

    DesignSeries() = default;
    explicit DesignSeries(std::vector<double> v) : values(std::move(v)) {
        if (values.size() < 2) throw InvalidParamsError("design series needs at least 2 observations");
    }

    long size() const noexcept { return static_cast<long>(values.size()); }

    double design_point(long k) const {
        return static_cast<double>(k + 1) / static_cast<double>(values.size());
    }
};

// The design grid {1/T, 2/T, ..., 1}.
inline std::vector<double> design_grid(long T) {
    std::vector<double> g(static_cast<size_t>(T));
    for (long t = 1; t <= T; ++t) g[static_cast<size_t>(t - 1)] = static_cast<double>(t) / static_cast<double>(T);
    return g;
}

// {0, 1/(n-1), ..., 1}; n = 201 is the default sup-norm proxy grid.
inline std::vector<double> uniform_grid(int n = 201) {
    if (n < 2) throw InvalidParamsError("grid needs at least 2 points");
    std::vector<double> g(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) g[static_cast<size_t>(k)] = static_cast<double>(k) / static_cast<double>(n - 1);
    return g;
}

}  // namespace tvreg
