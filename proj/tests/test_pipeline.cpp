#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "tvreg/pipeline.hpp"
#include "tvreg/rng.hpp"

using namespace tvreg;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    static const fs::path dir = [] {
        fs::path p = fs::temp_directory_path() / "tvreg_pipeline_tests";
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

std::string write_file(const std::string& name, const std::string& content) {
    const fs::path p = temp_dir() / name;
    std::ofstream out(p, std::ios::binary);
    out << content;
    return p.string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

// Monthly synthetic series: smooth trend + constant-phi AR noise + seasonal.
std::string synthetic_csv(long T, std::uint64_t seed, double seasonal_amp) {
    TvarModel m;
    m.trend = [](double u) { return 10.0 * std::tanh(2.0 * (u - 0.5)) + 3.0 * u; };
    m.ar_coef = [](double) { return 0.75; };
    m.sigma_e = 1.0;
    m.phi_bound = 0.76;
    const DesignSeries s = simulate(m, T, seed);
    std::ostringstream out;
    out << "time,value\n";
    out.precision(17);
    for (long t = 0; t < T; ++t) {
        const double season =
            seasonal_amp * std::sin(2.0 * std::numbers::pi * static_cast<double>(t + 1) / 12.0);
        out << (1993.0 + static_cast<double>(t) / 12.0) << ','
            << (s.values[static_cast<size_t>(t)] + season) << '\n';
    }
    return out.str();
}

// Minimal well-formedness scan: every opened tag is closed in order.
bool well_formed_xml(const std::string& text) {
    std::vector<std::string> stack;
    size_t i = 0;
    while ((i = text.find('<', i)) != std::string::npos) {
        const size_t end = text.find('>', i);
        if (end == std::string::npos) return false;
        std::string tag = text.substr(i + 1, end - i - 1);
        i = end + 1;
        if (tag.empty()) return false;
        if (tag[0] == '?' || tag[0] == '!') continue;
        const bool closing = tag[0] == '/';
        const bool self_closing = tag.back() == '/';
        if (closing) tag = tag.substr(1);
        const size_t sp = tag.find_first_of(" \t\n/");
        const std::string name = sp == std::string::npos ? tag : tag.substr(0, sp);
        if (closing) {
            if (stack.empty() || stack.back() != name) return false;
            stack.pop_back();
        } else if (!self_closing) {
            stack.push_back(name);
        }
    }
    return stack.empty();
}

size_t count_occurrences(const std::string& text, const std::string& needle) {
    size_t count = 0, pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
        ++count;
        pos += needle.size();
    }
    return count;
}

}  // namespace

TEST_CASE("ingest accepts a clean monthly file") {
    std::string csv = "time,value\n";
    for (int k = 0; k < 12; ++k)
        csv += std::to_string(2000.0 + k / 12.0) + "," + std::to_string(1.0 + k) + "\n";
    const IngestResult r = ingest_csv(write_file("clean.csv", csv), "time", "value");
    CHECK(r.series.size() == 12);
    CHECK(r.timestamps.size() == 12);
    CHECK(r.series.values[3] == 4.0);
}

TEST_CASE("ingest rejects malformed inputs with line numbers") {
    // a skipped month
    std::string gap = "time,value\n";
    for (int k = 0; k < 12; ++k) {
        if (k == 6) continue;
        gap += std::to_string(2000.0 + k / 12.0) + ",1.0\n";
    }
    CHECK_THROWS_AS(ingest_csv(write_file("gap.csv", gap), "time", "value"), DataError);
    CHECK_THROWS_WITH(ingest_csv(write_file("gap.csv", gap), "time", "value"),
                      Catch::Matchers::ContainsSubstring("irregular spacing"));

    const std::string nan_csv = "time,value\n1,0.5\n2,NaN\n3,0.7\n";
    CHECK_THROWS_AS(ingest_csv(write_file("nan.csv", nan_csv), "time", "value"), ParseError);
    CHECK_THROWS_WITH(ingest_csv(write_file("nan.csv", nan_csv), "time", "value"),
                      Catch::Matchers::ContainsSubstring("line 3"));

    const std::string ragged = "time,value\n1,0.5\n2\n3,0.7\n";
    CHECK_THROWS_AS(ingest_csv(write_file("ragged.csv", ragged), "time", "value"), ParseError);

    const std::string missing = "time,value\n1,0.5\n2,\n3,0.7\n";
    CHECK_THROWS_WITH(ingest_csv(write_file("missing.csv", missing), "time", "value"),
                      Catch::Matchers::ContainsSubstring("missing value"));

    const std::string junk = "time,value\n1,0.5\n2,abc\n";
    CHECK_THROWS_AS(ingest_csv(write_file("junk.csv", junk), "time", "value"), ParseError);

    const std::string ok = "time,value\n1,0.5\n2,0.6\n";
    CHECK_THROWS_AS(ingest_csv(write_file("cols.csv", ok), "time", "level"), DataError);
    CHECK_THROWS_AS(ingest_csv((temp_dir() / "absent.csv").string(), "time", "value"), DataError);
}

TEST_CASE("ingest honors rfc 4180 quoting") {
    const std::string csv = "\"time\",\"value\"\n\"1\",\"0.5\"\n2,\"1.5\"\n";
    const IngestResult r = ingest_csv(write_file("quoted.csv", csv), "time", "value");
    CHECK(r.series.values[1] == 1.5);
}

TEST_CASE("deseasonalize removes pure harmonics exactly") {
    const long T = 240;
    std::vector<double> x(T);
    for (long t = 1; t <= T; ++t)
        x[static_cast<size_t>(t - 1)] =
            2.5 * std::sin(2.0 * std::numbers::pi * t / 12.0 + 0.7);
    const HarmonicFit fit = deseasonalize(x, {12.0});
    for (const double v : fit.residual) CHECK(std::abs(v) <= 1e-8);
    CHECK(fit.coefficients.size() == 2);
}

TEST_CASE("deseasonalize on white noise only removes its degrees of freedom") {
    Rng rng(5);
    const long T = 2000;
    std::vector<double> x(T);
    for (auto& v : x) v = rng.normal();
    auto variance = [](const std::vector<double>& v) {
        double mean = 0.0;
        for (const double w : v) mean += w;
        mean /= static_cast<double>(v.size());
        double acc = 0.0;
        for (const double w : v) acc += (w - mean) * (w - mean);
        return acc / static_cast<double>(v.size());
    };
    const HarmonicFit fit = deseasonalize(x, {12.0, 6.0});
    const double in = variance(x), out = variance(fit.residual);
    CHECK(std::abs(out - in) / in <= 2.0 * (2.0 * 4.0 / static_cast<double>(T)));
}

TEST_CASE("deseasonalize keeps the trend") {
    const long T = 360;
    std::vector<double> x(T), trend(T);
    for (long t = 1; t <= T; ++t) {
        trend[static_cast<size_t>(t - 1)] = 0.01 * static_cast<double>(t);
        x[static_cast<size_t>(t - 1)] =
            trend[static_cast<size_t>(t - 1)] + std::sin(2.0 * std::numbers::pi * t / 12.0);
    }
    const HarmonicFit fit = deseasonalize(x, {12.0});
    double num = 0, da = 0, db = 0, ma = 0, mb = 0;
    for (long t = 0; t < T; ++t) {
        ma += fit.residual[static_cast<size_t>(t)];
        mb += trend[static_cast<size_t>(t)];
    }
    ma /= static_cast<double>(T);
    mb /= static_cast<double>(T);
    for (long t = 0; t < T; ++t) {
        const double a = fit.residual[static_cast<size_t>(t)] - ma;
        const double b = trend[static_cast<size_t>(t)] - mb;
        num += a * b;
        da += a * a;
        db += b * b;
    }
    CHECK(num / std::sqrt(da * db) > 0.99);
}

TEST_CASE("deseasonalize input validation") {
    std::vector<double> tiny(8, 1.0);
    CHECK_THROWS_AS(deseasonalize(tiny, {12.0}), DataError);
    std::vector<double> x(100, 1.0);
    CHECK_THROWS_AS(deseasonalize(x, {}), InvalidParamsError);
    CHECK_THROWS_AS(deseasonalize(x, {-3.0}), InvalidParamsError);
    // a period of 2 makes the sine column identically zero
    std::vector<double> y(100);
    for (size_t t = 0; t < y.size(); ++t) y[t] = std::cos(std::numbers::pi * static_cast<double>(t + 1));
    CHECK_THROWS_AS(deseasonalize(y, {2.0}), DataError);
}

TEST_CASE("drift correction arithmetic") {
    std::vector<double> flat(121, 10.0);
    std::vector<double> times(121);
    for (size_t k = 0; k < times.size(); ++k) times[k] = 2000.0 + static_cast<double>(k) / 12.0;

    const std::vector<double> same = apply_drift_correction(flat, times, 0.0, 2000.0);
    CHECK(same == flat);

    const std::vector<double> fixed = apply_drift_correction(flat, times, 0.145, 2000.0);
    CHECK(fixed.front() - flat.front() == 0.0);
    CHECK((fixed.back() - fixed.front()) == Catch::Approx(-1.45).margin(1e-12));
    // exact affine ramp
    for (size_t k = 0; k < fixed.size(); ++k)
        CHECK(fixed[k] == Catch::Approx(10.0 - 0.145 * (times[k] - 2000.0)).margin(1e-12));
}

TEST_CASE("pipeline is deterministic and statistically sane on synthetic data") {
    const std::string input = write_file("synthetic383.csv", synthetic_csv(383, 99, 3.0));

    PipelineConfig cfg;
    cfg.input_path = input;
    cfg.deseasonalize = true;
    cfg.harmonics = {12.0, 6.0};
    cfg.output_dir = (temp_dir() / "run1").string();
    const PipelineResult r1 = run_pipeline(cfg);

    cfg.output_dir = (temp_dir() / "run2").string();
    const PipelineResult r2 = run_pipeline(cfg);

    CHECK(slurp((temp_dir() / "run1" / "curves.csv").string()) ==
          slurp((temp_dir() / "run2" / "curves.csv").string()));
    CHECK(slurp((temp_dir() / "run1" / "diagnostics.json").string()) ==
          slurp((temp_dir() / "run2" / "diagnostics.json").string()));

    // interior phi estimates should sit near the true 0.75
    std::vector<double> phis = r1.fit.phi_hat.values;
    std::sort(phis.begin(), phis.end());
    const double median = phis[phis.size() / 2];
    CHECK(median >= 0.65);
    CHECK(median <= 0.85);

    // curves.csv carries T rows plus the header
    std::istringstream rows(slurp((temp_dir() / "run1" / "curves.csv").string()));
    std::string line;
    long count = 0;
    while (std::getline(rows, line)) ++count;
    CHECK(count == 384);
}

TEST_CASE("pipeline stages compose: no optional stages means a plain fit") {
    const std::string input = write_file("plain.csv", synthetic_csv(200, 5, 0.0));
    PipelineConfig cfg;
    cfg.input_path = input;
    cfg.bandwidth_mode = BandwidthMode::Fixed;
    cfg.h = 0.2;
    cfg.output_dir = (temp_dir() / "plain_run").string();
    const PipelineResult res = run_pipeline(cfg);
    CHECK(res.h == 0.2);
    CHECK(res.v == 0.2);
    CHECK(res.b == 0.4);
    CHECK(res.cv_curve.empty());

    // matches a direct two-step fit on the same series
    const IngestResult ing = ingest_csv(input, "time", "value");
    const TwoStepFit direct = fit_two_step(ing.series, epanechnikov(), epanechnikov(), 0.2, 0.2, 0.4);
    for (size_t k = 0; k < direct.g_hat.values.size(); k += 37)
        CHECK(res.fit.g_hat.values[k] == direct.g_hat.values[k]);
}

TEST_CASE("pipeline error propagation carries stage labels") {
    PipelineConfig cfg;
    cfg.input_path = (temp_dir() / "nope.csv").string();
    cfg.output_dir = (temp_dir() / "err_run").string();
    CHECK_THROWS_WITH(run_pipeline(cfg), Catch::Matchers::ContainsSubstring("ingest"));

    const std::string input = write_file("short.csv", synthetic_csv(60, 6, 0.0));
    PipelineConfig bad;
    bad.input_path = input;
    bad.bandwidth_mode = BandwidthMode::Fixed;
    bad.h = 0.2;
    bad.v = 0.3;
    bad.b = 0.25;  // v > b
    bad.output_dir = (temp_dir() / "err_run2").string();
    CHECK_THROWS_AS(run_pipeline(bad), NumericError);
}

TEST_CASE("svg outputs are well formed and reference each series once") {
    const std::string input = write_file("svg_input.csv", synthetic_csv(240, 17, 2.0));
    PipelineConfig cfg;
    cfg.input_path = input;
    cfg.deseasonalize = true;
    cfg.harmonics = {12.0};
    cfg.bandwidth_mode = BandwidthMode::Fixed;
    cfg.h = 0.2;
    cfg.output_dir = (temp_dir() / "svg_run").string();
    run_pipeline(cfg);

    const std::string series_svg = slurp((temp_dir() / "svg_run" / "series.svg").string());
    CHECK(well_formed_xml(series_svg));
    CHECK(count_occurrences(series_svg, "class=\"series-y\"") == 1);
    CHECK(count_occurrences(series_svg, "class=\"series-g_hat\"") == 1);

    for (const std::string name :
         {"phi.svg", "acf_trend_residuals.svg", "pacf_trend_residuals.svg",
          "acf_final_residuals.svg", "pacf_final_residuals.svg"}) {
        const std::string svg = slurp((temp_dir() / "svg_run" / name).string());
        CHECK(well_formed_xml(svg));
        CHECK(count_occurrences(svg, "class=\"series-") == 1);
    }
}

TEST_CASE("config json round trip") {
    const std::string text = R"({
        "input_path": "x.csv",
        "time_column": "t",
        "value_column": "sla",
        "deseasonalize": true,
        "harmonics": [12, 6],
        "drift_rate_per_year": 0.145,
        "drift_epoch": 1993.0,
        "kernel": "epanechnikov",
        "bandwidth_mode": "fixed",
        "h": 0.29,
        "v": 0.2,
        "b": 0.4,
        "output_dir": "out",
        "seed": 9,
        "units": "mm"
    })";
    const PipelineConfig cfg = pipeline_config_from_json(text);
    CHECK(cfg.input_path == "x.csv");
    CHECK(cfg.time_column == "t");
    CHECK(cfg.value_column == "sla");
    CHECK(cfg.deseasonalize);
    CHECK(cfg.harmonics == std::vector<double>{12.0, 6.0});
    CHECK(cfg.drift_rate_per_year == 0.145);
    CHECK(cfg.bandwidth_mode == BandwidthMode::Fixed);
    CHECK(cfg.h == 0.29);
    CHECK(cfg.units == "mm");
    CHECK_THROWS_AS(pipeline_config_from_json("{not json"), DataError);
    CHECK_THROWS_AS(pipeline_config_from_json(R"({"bandwidth_mode": "magic"})"), DataError);
}

TEST_CASE("final residuals pass the portmanteau screen in most replications") {
    const std::vector<int> lags = {5, 8, 10, 13, 15, 18, 20, 23, 25, 28, 30};
    int clean = 0;
    const int n_seeds = 50;
    for (int seed = 0; seed < n_seeds; ++seed) {
        TvarModel m;
        m.trend = [](double u) { return 10.0 * std::tanh(2.0 * (u - 0.5)) + 3.0 * u; };
        m.ar_coef = [](double) { return 0.75; };
        m.sigma_e = 1.0;
        m.phi_bound = 0.76;
        const DesignSeries s = simulate(m, 383, 5000 + static_cast<std::uint64_t>(seed));
        CvConfig cv;
        const double h = select_bandwidth(s, epanechnikov(), cv);
        const double v = default_step2_bandwidth(h);
        const TwoStepFit fit = fit_two_step(s, epanechnikov(), epanechnikov(), h, v, 2.0 * v);
        const std::vector<LjungBoxRow> rows = ljung_box(fit.residuals_e, lags);
        bool all_clear = true;
        for (const LjungBoxRow& row : rows)
            if (row.p_value <= 0.05) all_clear = false;
        if (all_clear) ++clean;
    }
    CHECK(clean >= static_cast<int>(0.8 * n_seeds));
}
