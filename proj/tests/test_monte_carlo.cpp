#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "tvreg/monte_carlo.hpp"

using namespace tvreg;

TEST_CASE("benchmark process anchors") {
    CHECK(benchmark_trend(0.56) == Catch::Approx(5.04).margin(1e-12));
    CHECK(benchmark_ar_coef(0.0) == Catch::Approx(0.755 + 0.02 * std::sin(2.1)).margin(1e-15));
    CHECK(benchmark_ar_coef(0.0) == Catch::Approx(0.77226).margin(5e-5));
    // the coefficient stays well inside the unit circle
    for (int k = 0; k <= 1000; ++k) {
        const double u = k / 1000.0;
        CHECK(std::abs(benchmark_ar_coef(u)) <= 0.8);
    }
    benchmark_model(1.0).validate();
}

TEST_CASE("fixed-bandwidth study: shapes, quantiles, reproducibility") {
    MonteCarloConfig cfg;
    cfg.T_list = {100, 300};
    cfg.sigma2_list = {1.0};
    cfg.n_reps = 16;
    cfg.bandwidth_mode = BandwidthMode::Fixed;
    cfg.fixed_h = 0.25;
    cfg.fixed_v = 0.2;
    cfg.seed_base = 42;
    const std::vector<MaseReport> reports = mc_table1(cfg);
    REQUIRE(reports.size() == 2);
    for (const MaseReport& r : reports) {
        CHECK(r.n_reps == 16);
        CHECK(r.mase_g > 0.0);
        CHECK(r.mase_phi > 0.0);
        for (size_t k = 1; k < r.ase_g_quantiles.size(); ++k) {
            CHECK(r.ase_g_quantiles[k - 1] <= r.ase_g_quantiles[k]);
            CHECK(r.ase_phi_quantiles[k - 1] <= r.ase_phi_quantiles[k]);
        }
        // the mean sits inside the reported spread
        CHECK(r.mase_g >= r.ase_g_quantiles.front());
        CHECK(r.mase_g <= r.ase_g_quantiles.back());
    }

    // bit-identical reruns, independent of the thread count
    MonteCarloConfig threaded = cfg;
    threaded.threads = 3;
    const std::vector<MaseReport> again = mc_table1(threaded);
    for (size_t i = 0; i < reports.size(); ++i) {
        CHECK(reports[i].mase_g == again[i].mase_g);
        CHECK(reports[i].mase_phi == again[i].mase_phi);
        CHECK(reports[i].ase_g_quantiles == again[i].ase_g_quantiles);
    }

    // a different seed base moves the estimates
    MonteCarloConfig other = cfg;
    other.seed_base = 43;
    CHECK(mc_table1(other)[0].mase_g != reports[0].mase_g);
}

TEST_CASE("errors shrink with the sample size") {
    MonteCarloConfig cfg;
    cfg.T_list = {100, 300, 700};
    cfg.sigma2_list = {1.0};
    cfg.n_reps = 30;
    cfg.bandwidth_mode = BandwidthMode::Fixed;
    cfg.fixed_h = 0.2;
    cfg.fixed_v = 0.2;
    cfg.seed_base = 7;
    const std::vector<MaseReport> reports = mc_table1(cfg);
    REQUIRE(reports.size() == 3);
    CHECK(reports[0].mase_g > reports[1].mase_g);
    CHECK(reports[1].mase_g > reports[2].mase_g);
    CHECK(reports[0].mase_phi > reports[1].mase_phi);
    CHECK(reports[1].mase_phi > reports[2].mase_phi);
}

TEST_CASE("csv layout") {
    MonteCarloConfig cfg;
    cfg.T_list = {100};
    cfg.sigma2_list = {1.0, 3.0};
    cfg.n_reps = 4;
    cfg.bandwidth_mode = BandwidthMode::Fixed;
    const std::string csv = mase_csv(mc_table1(cfg));
    std::istringstream in(csv);
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 3);  // header + two cells
    CHECK(csv.rfind("T,sigma2,n_reps,mase_g,mase_phi,", 0) == 0);
}

TEST_CASE("cv mode runs end to end on a small cell") {
    MonteCarloConfig cfg;
    cfg.T_list = {150};
    cfg.sigma2_list = {1.0};
    cfg.n_reps = 3;
    cfg.bandwidth_mode = BandwidthMode::CV;
    cfg.seed_base = 11;
    const std::vector<MaseReport> reports = mc_table1(cfg);
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].mase_g > 0.0);
    CHECK(std::isfinite(reports[0].mase_g));
}
