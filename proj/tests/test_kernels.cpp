#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <functional>
#include <vector>

#include "tvreg/kernels.hpp"
#include "tvreg/rng.hpp"

using namespace tvreg;

namespace {

const std::vector<KernelFamily> kAllFamilies = {
    KernelFamily::Epanechnikov, KernelFamily::Triangular, KernelFamily::Biweight,
    KernelFamily::Triweight, KernelFamily::Uniform};

// Composite Simpson rule; independent reference for the closed-form moments.
double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n % 2 == 1) ++n;
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

}  // namespace

TEST_CASE("kernel evaluation matches closed forms") {
    const KernelSpec epa = epanechnikov();
    CHECK(eval(epa, 0.0) == 0.75);
    CHECK(eval(epa, 1.5) == 0.0);
    CHECK(eval(epa, 0.5) == Catch::Approx(0.5625).margin(1e-15));
    CHECK(eval(make_kernel(KernelFamily::Triangular), 0.25) == Catch::Approx(0.75));
    CHECK(eval(make_kernel(KernelFamily::Uniform), 0.999) == 0.5);
}

TEST_CASE("kernel is exactly zero outside its support") {
    for (const KernelFamily fam : kAllFamilies) {
        const KernelSpec k = make_kernel(fam);
        for (const double u : {1.0000001, 1.5, 2.0, -1.0000001, -7.0, 100.0}) {
            // bitwise zero, not merely small
            CHECK(eval(k, u) == 0.0);
        }
    }
}

TEST_CASE("kernel bound and unit mass") {
    for (const KernelFamily fam : kAllFamilies) {
        const KernelSpec k = make_kernel(fam);
        double max_abs = 0.0;
        for (int i = 0; i <= 10000; ++i) {
            const double u = -1.0 + 2.0 * i / 10000.0;
            max_abs = std::max(max_abs, std::abs(eval(k, u)));
        }
        CHECK(max_abs <= k.bound + 1e-12);
        CHECK(analytic_moment(k, 0, MomentRegion::Interior) == Catch::Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("lipschitz constant holds on a dense grid") {
    for (const KernelFamily fam : kAllFamilies) {
        const KernelSpec k = make_kernel(fam);
        if (!std::isfinite(k.lipschitz)) continue;
        const int n = 100000;
        double max_ratio = 0.0;
        double prev_u = -1.2, prev_k = eval(k, prev_u);
        for (int i = 1; i <= n; ++i) {
            const double u = -1.2 + 2.4 * i / n;
            const double kv = eval(k, u);
            max_ratio = std::max(max_ratio, std::abs(kv - prev_k) / (u - prev_u));
            prev_u = u;
            prev_k = kv;
        }
        CHECK(max_ratio <= k.lipschitz * (1.0 + 1e-9));
    }
}

TEST_CASE("symmetry on sampled points") {
    for (const KernelFamily fam : kAllFamilies) {
        const KernelSpec k = make_kernel(fam);
        for (int i = 0; i <= 100; ++i) {
            const double u = i / 100.0;
            CHECK(eval(k, u) == eval(k, -u));
        }
    }
}

TEST_CASE("scaled evaluation") {
    const KernelSpec epa = epanechnikov();
    CHECK(eval_scaled(epa, 0.0, 0.5) == Catch::Approx(1.5));
    CHECK(eval_scaled(epa, 0.6, 0.5) == 0.0);
    CHECK(eval_scaled(epa, 0.25, 0.5) == Catch::Approx(1.125));
    CHECK_THROWS_AS(eval_scaled(epa, 0.1, 0.0), InvalidBandwidthError);
    CHECK_THROWS_AS(eval_scaled(epa, 0.1, -0.2), InvalidBandwidthError);
}

TEST_CASE("support indices: interior and boundary windows") {
    const IndexRange mid = support_indices(100, 0.5, 0.05);
    CHECK(mid.first == 45);
    CHECK(mid.last == 55);
    CHECK(mid.count() == 11);

    const IndexRange left = support_indices(100, 0.0, 0.05);
    CHECK(left.first == 1);
    CHECK(left.last == 5);
    CHECK(left.count() == 5);

    CHECK_THROWS_AS(support_indices(100, 0.5, -0.1), InvalidBandwidthError);
    CHECK_THROWS_AS(support_indices(100, 1.5, 0.1), InvalidParamsError);
    CHECK_THROWS_AS(support_indices(100, 0.5, 0.005), InvalidParamsError);
}

TEST_CASE("support indices cardinality bound") {
    Rng rng(42);
    for (int trial = 0; trial < 1000; ++trial) {
        const long T = 50 + static_cast<long>(rng.uniform01() * 99950.0);
        const double L = 1.0 + rng.uniform01();
        double h = std::exp(rng.uniform(std::log(2.0 / (static_cast<double>(T) * L)), std::log(0.49 / L)));
        const double x = rng.uniform01();
        const IndexRange r = support_indices(T, x, h, L);
        CHECK(r.count() >= 1);
        CHECK(static_cast<double>(r.count()) <=
              2.0 * static_cast<double>(T) * L * h + 1.0 + 1e-6);
    }
}

TEST_CASE("analytic moments match hand values and quadrature") {
    const KernelSpec epa = epanechnikov();
    CHECK(analytic_moment(epa, 0, MomentRegion::Interior) == Catch::Approx(1.0).margin(1e-15));
    CHECK(analytic_moment(epa, 1, MomentRegion::Interior) == Catch::Approx(0.0).margin(1e-15));
    CHECK(analytic_moment(epa, 2, MomentRegion::Interior) == Catch::Approx(0.2).margin(1e-15));
    CHECK(analytic_moment(epa, 0, MomentRegion::LeftBoundary) == Catch::Approx(0.5).margin(1e-15));
    CHECK(analytic_moment(epa, 1, MomentRegion::LeftBoundary) == Catch::Approx(0.1875).margin(1e-15));
    CHECK(analytic_moment(epa, 2, MomentRegion::LeftBoundary) == Catch::Approx(0.1).margin(1e-15));
    CHECK(analytic_moment(epa, 1, MomentRegion::RightBoundary) == Catch::Approx(-0.1875).margin(1e-15));

    CHECK(analytic_moment(make_kernel(KernelFamily::Triangular), 2, MomentRegion::Interior) ==
          Catch::Approx(1.0 / 6.0).margin(1e-15));
    CHECK(analytic_moment(make_kernel(KernelFamily::Uniform), 2, MomentRegion::Interior) ==
          Catch::Approx(1.0 / 3.0).margin(1e-15));

    CHECK_THROWS_AS(analytic_moment(epa, 5, MomentRegion::Interior), NotImplementedError);

    // closed-form partial moments vs an independent quadrature
    Rng rng(7);
    for (const KernelFamily fam : kAllFamilies) {
        const KernelSpec k = make_kernel(fam);
        for (int j = 0; j <= 4; ++j) {
            const double a = rng.uniform(-1.0, 0.5);
            const double b = rng.uniform(a, 1.0);
            const double ref = simpson([&](double u) { return std::pow(u, j) * eval(k, u); }, a, b, 20000);
            CHECK(partial_moment(k, j, a, b) == Catch::Approx(ref).margin(1e-9));
        }
    }
}

TEST_CASE("riemann sums approach the truncated integral at rate 1/T") {
    const KernelSpec epa = epanechnikov();

    CHECK(riemann_gap(epa, 1000, 0.5, 0.1, 0) <= 10.0 / 1000.0);
    CHECK(riemann_gap(epa, 1000, 0.5, 0.25, 0) < 1.0);

    // worst gap over an x-grid scales like 1/T: doubling T about halves it
    auto worst_gap = [&](long T) {
        double w = 0.0;
        for (int i = 0; i <= 100; ++i) w = std::max(w, riemann_gap(epa, T, i / 100.0, 0.1, 0));
        return w;
    };
    for (const long T : {500L, 1000L, 2000L}) {
        const double ratio = worst_gap(T) / worst_gap(2 * T);
        CHECK(ratio >= 1.5);
        CHECK(ratio <= 2.5);
    }

    // T * gap bounded by one constant across magnitudes
    for (const long T : {1000L, 10000L}) {
        for (int j = 0; j <= 2; ++j) {
            double worst = 0.0;
            for (int i = 0; i <= 100; ++i)
                worst = std::max(worst, riemann_gap(epa, T, i / 100.0, 0.1, j));
            CHECK(worst * static_cast<double>(T) < 2.0);
        }
    }
}
