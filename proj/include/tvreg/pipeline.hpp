#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tvreg/bandwidth.hpp"
#include "tvreg/csv.hpp"
#include "tvreg/diagnostics.hpp"
#include "tvreg/json_writer.hpp"
#include "tvreg/svg.hpp"
#include "tvreg/tvar.hpp"

namespace tvreg {

struct PipelineConfig {
    std::string input_path;
    std::string time_column = "time";
    std::string value_column = "value";
    bool deseasonalize = false;
    std::vector<double> harmonics = {12.0, 6.0};  // periods in samples
    double drift_rate_per_year = 0.0;             // e.g. a GIA rate, same units as the series
    std::optional<double> drift_epoch;            // default: first timestamp
    KernelFamily kernel = KernelFamily::Epanechnikov;
    BandwidthMode bandwidth_mode = BandwidthMode::CV;
    std::optional<double> h;    // required in fixed mode
    std::optional<double> v;    // default: min(h, 0.2)
    std::optional<double> b;    // default: 2 v
    std::string output_dir = ".";
    std::uint64_t seed = 1;
    std::string units;          // annotation copied into outputs, never converted
    std::vector<int> ljung_box_lags = {5, 8, 10, 13, 15, 18, 20, 23, 25, 28, 30};
    int max_lag = 30;
};

inline PipelineConfig pipeline_config_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError(std::string("config is not valid json: ") + e.what());
    }
    PipelineConfig cfg;
    try {
        if (j.contains("input_path")) cfg.input_path = j["input_path"].get<std::string>();
        if (j.contains("time_column")) cfg.time_column = j["time_column"].get<std::string>();
        if (j.contains("value_column")) cfg.value_column = j["value_column"].get<std::string>();
        if (j.contains("deseasonalize")) cfg.deseasonalize = j["deseasonalize"].get<bool>();
        if (j.contains("harmonics")) cfg.harmonics = j["harmonics"].get<std::vector<double>>();
        if (j.contains("drift_rate_per_year"))
            cfg.drift_rate_per_year = j["drift_rate_per_year"].get<double>();
        if (j.contains("drift_epoch")) cfg.drift_epoch = j["drift_epoch"].get<double>();
        if (j.contains("kernel")) cfg.kernel = kernel_from_name(j["kernel"].get<std::string>());
        if (j.contains("bandwidth_mode")) {
            const std::string mode = j["bandwidth_mode"].get<std::string>();
            if (mode == "cv") cfg.bandwidth_mode = BandwidthMode::CV;
            else if (mode == "fixed") cfg.bandwidth_mode = BandwidthMode::Fixed;
            else throw DataError("bandwidth_mode must be 'cv' or 'fixed'");
        }
        if (j.contains("h")) cfg.h = j["h"].get<double>();
        if (j.contains("v")) cfg.v = j["v"].get<double>();
        if (j.contains("b")) cfg.b = j["b"].get<double>();
        if (j.contains("b_t")) cfg.b = j["b_t"].get<double>();
        if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
        if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("units")) cfg.units = j["units"].get<std::string>();
        if (j.contains("ljung_box_lags")) cfg.ljung_box_lags = j["ljung_box_lags"].get<std::vector<int>>();
        if (j.contains("max_lag")) cfg.max_lag = j["max_lag"].get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("bad config value: ") + e.what());
    }
    return cfg;
}

struct IngestResult {
    DesignSeries series;
    std::vector<double> timestamps;
};

// Read one numeric column bound to an equally spaced time column. Spacing
// must be constant within 1% of the median step; gaps and non-numeric or
// missing values are reported with their line numbers.
inline IngestResult ingest_csv(const std::string& path, const std::string& time_column,
                               const std::string& value_column) {
    const CsvTable table = read_csv(path);
    const long tc = table.column(time_column);
    const long vc = table.column(value_column);
    if (table.rows.size() < 2) throw DataError("need at least 2 rows, got " + std::to_string(table.rows.size()));

    std::vector<double> times, values;
    times.reserve(table.rows.size());
    values.reserve(table.rows.size());
    for (size_t r = 0; r < table.rows.size(); ++r) {
        const long line = table.row_lines[r];
        times.push_back(parse_number(table.rows[r][static_cast<size_t>(tc)], line));
        values.push_back(parse_number(table.rows[r][static_cast<size_t>(vc)], line));
    }

    std::vector<double> steps;
    steps.reserve(times.size() - 1);
    for (size_t i = 1; i < times.size(); ++i) steps.push_back(times[i] - times[i - 1]);
    std::vector<double> sorted = steps;
    std::sort(sorted.begin(), sorted.end());
    const double step = sorted[sorted.size() / 2];
    if (!(step > 0.0)) throw DataError("time column is not strictly increasing");
    for (size_t i = 0; i < steps.size(); ++i) {
        if (std::abs(steps[i] - step) > 0.01 * step)
            throw DataError("irregular spacing between rows " + std::to_string(i + 1) + " and " +
                            std::to_string(i + 2) + ": step " + std::to_string(steps[i]) +
                            " vs median " + std::to_string(step) + " (line " +
                            std::to_string(table.row_lines[i + 1]) + ")");
    }

    IngestResult out{DesignSeries(std::move(values)), std::move(times)};
    return out;
}

struct HarmonicFit {
    std::vector<double> residual;
    std::vector<double> periods;
    std::vector<double> coefficients;  // (sin, cos) pair per period
};

// Least-squares removal of fixed-period sine/cosine components (t = 1..T in
// samples). The projection is exact for pure harmonics of the given periods.
inline HarmonicFit deseasonalize(const std::vector<double>& values, const std::vector<double>& periods) {
    const long T = static_cast<long>(values.size());
    const size_t k = 2 * periods.size();
    if (k == 0) throw InvalidParamsError("no harmonic periods given");
    for (const double p : periods)
        if (!(p > 0.0)) throw InvalidParamsError("harmonic periods must be positive");
    if (T <= static_cast<long>(4 * k)) throw DataError("series too short for harmonic regression");

    std::vector<std::vector<double>> cols(k, std::vector<double>(static_cast<size_t>(T)));
    for (long t = 0; t < T; ++t) {
        const double ts = static_cast<double>(t + 1);
        for (size_t pidx = 0; pidx < periods.size(); ++pidx) {
            const double w = 2.0 * std::numbers::pi * ts / periods[pidx];
            cols[2 * pidx][static_cast<size_t>(t)] = std::sin(w);
            cols[2 * pidx + 1][static_cast<size_t>(t)] = std::cos(w);
        }
    }

    // normal equations, Gaussian elimination with partial pivoting
    std::vector<std::vector<double>> a(k, std::vector<double>(k + 1, 0.0));
    for (size_t i = 0; i < k; ++i) {
        for (size_t j = i; j < k; ++j) {
            double dot = 0.0;
            for (long t = 0; t < T; ++t) dot += cols[i][static_cast<size_t>(t)] * cols[j][static_cast<size_t>(t)];
            a[i][j] = a[j][i] = dot;
        }
        double rhs = 0.0;
        for (long t = 0; t < T; ++t) rhs += cols[i][static_cast<size_t>(t)] * values[static_cast<size_t>(t)];
        a[i][k] = rhs;
    }
    for (size_t col = 0; col < k; ++col) {
        size_t piv = col;
        for (size_t r = col + 1; r < k; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-10 * static_cast<double>(T))
            throw DataError("harmonic design is rank deficient (duplicate or degenerate period?)");
        std::swap(a[col], a[piv]);
        for (size_t r = 0; r < k; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            for (size_t c = col; c <= k; ++c) a[r][c] -= f * a[col][c];
        }
    }

    HarmonicFit fit;
    fit.periods = periods;
    fit.coefficients.resize(k);
    for (size_t i = 0; i < k; ++i) fit.coefficients[i] = a[i][k] / a[i][i];
    fit.residual = values;
    for (long t = 0; t < T; ++t) {
        double fitted = 0.0;
        for (size_t i = 0; i < k; ++i) fitted += fit.coefficients[i] * cols[i][static_cast<size_t>(t)];
        fit.residual[static_cast<size_t>(t)] -= fitted;
    }
    return fit;
}

// Subtract rate * (years since epoch); exact and linear.
inline std::vector<double> apply_drift_correction(const std::vector<double>& values,
                                                  const std::vector<double>& timestamps,
                                                  double rate_per_year, double epoch) {
    if (values.size() != timestamps.size())
        throw InvalidParamsError("values and timestamps must have equal length");
    std::vector<double> out(values.size());
    for (size_t i = 0; i < values.size(); ++i)
        out[i] = values[i] - rate_per_year * (timestamps[i] - epoch);
    return out;
}

struct PipelineResult {
    long sample_size = 0;
    double h = 0.0, v = 0.0, b = 0.0;
    TwoStepFit fit;
    DiagnosticsReport trend_residual_diag;  // with BIC grid
    DiagnosticsReport final_residual_diag;  // with Ljung-Box rows
    std::vector<CvPoint> cv_curve;          // empty in fixed mode
    std::vector<std::string> files_written;
};

namespace detail {

template <typename Fn>
auto run_stage(const char* stage, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const DataError& e) {
        throw DataError(std::string(stage) + ": " + e.what());
    } catch (const NumericError& e) {
        throw NumericError(std::string(stage) + ": " + e.what());
    }
}

inline std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

// Ingest -> optional drift correction -> optional deseasonalization ->
// bandwidth selection -> two-step fit -> residual diagnostics -> reports.
// Writes curves.csv, diagnostics.json and the SVG plots into output_dir;
// byte-identical outputs for identical inputs.
inline PipelineResult run_pipeline(const PipelineConfig& cfg) {
    namespace fs = std::filesystem;

    IngestResult ingest = detail::run_stage("ingest", [&] {
        return ingest_csv(cfg.input_path, cfg.time_column, cfg.value_column);
    });
    const long T = ingest.series.size();

    std::vector<double> working = ingest.series.values;
    if (cfg.drift_rate_per_year != 0.0) {
        const double epoch = cfg.drift_epoch.value_or(ingest.timestamps.front());
        working = detail::run_stage("drift-correction", [&] {
            return apply_drift_correction(working, ingest.timestamps, cfg.drift_rate_per_year, epoch);
        });
    }
    std::vector<double> seasonal_coeffs;
    if (cfg.deseasonalize) {
        HarmonicFit season = detail::run_stage("deseasonalize", [&] {
            return deseasonalize(working, cfg.harmonics);
        });
        working = std::move(season.residual);
        seasonal_coeffs = std::move(season.coefficients);
    }
    const DesignSeries series{working};
    const KernelSpec spec = make_kernel(cfg.kernel);

    PipelineResult result;
    result.sample_size = T;

    if (cfg.bandwidth_mode == BandwidthMode::CV) {
        detail::run_stage("cross-validation", [&] {
            CvConfig cv;
            result.cv_curve = cv_curve(series, spec, cv);
            double best_h = 0.0, best_score = 0.0;
            bool found = false;
            for (const CvPoint& p : result.cv_curve) {
                if (!p.feasible) continue;
                if (!found || p.score <= best_score) {
                    best_h = p.h;
                    best_score = p.score;
                    found = true;
                }
            }
            if (!found) throw NoFeasibleBandwidthError("every candidate bandwidth was infeasible");
            result.h = best_h;
            return 0;
        });
    } else {
        if (!cfg.h) throw InvalidParamsError("fixed bandwidth mode requires h");
        result.h = *cfg.h;
    }
    result.v = cfg.v.value_or(default_step2_bandwidth(result.h));
    result.b = cfg.b.value_or(2.0 * result.v);

    result.fit = detail::run_stage("two-step-fit", [&] {
        return fit_two_step(series, spec, spec, result.h, result.v, result.b);
    });

    const int max_lag = std::max(1, std::min<int>(cfg.max_lag, static_cast<int>(T / 2) - 1));
    std::vector<int> lb_lags;
    for (const int lag : cfg.ljung_box_lags)
        if (lag <= max_lag) lb_lags.push_back(lag);

    result.trend_residual_diag = detail::run_stage("trend-residual-diagnostics", [&] {
        const int max_order = std::min(4L, std::max(0L, T / 20 - 1));
        DiagnosticsReport rep = diagnose(result.fit.residuals_v, max_lag, {}, false);
        const ArmaGrid grid = arma_bic_grid(result.fit.residuals_v, max_order, max_order);
        rep.bic_grid = grid.bic;
        rep.best_order = grid.best;
        return rep;
    });
    result.final_residual_diag = detail::run_stage("final-residual-diagnostics", [&] {
        return diagnose(result.fit.residuals_e, max_lag, lb_lags, false);
    });

    // ---- reports ------------------------------------------------------
    fs::create_directories(cfg.output_dir);
    auto out_path = [&](const std::string& name) { return (fs::path(cfg.output_dir) / name).string(); };

    {  // curves.csv
        std::ofstream out(out_path("curves.csv"), std::ios::binary);
        if (!out) throw DataError("cannot write " + out_path("curves.csv"));
        out << "t,time,y,g_hat,v_hat,phi_hat,phi_interior,e_hat\n";
        const double lo = result.fit.phi_hat.grid.front();
        const double hi = result.fit.phi_hat.grid.back();
        for (long t = 1; t <= T; ++t) {
            const size_t i = static_cast<size_t>(t - 1);
            const double x = static_cast<double>(t) / static_cast<double>(T);
            const bool interior = x >= lo && x <= hi;
            const double phi_x = interior ? result.fit.phi_hat.value_at(x)
                                          : (x < lo ? result.fit.phi_hat.values.front()
                                                    : result.fit.phi_hat.values.back());
            out << t << ',' << detail::format_real(ingest.timestamps[i]) << ','
                << detail::format_real(series.values[i]) << ','
                << detail::format_real(result.fit.g_hat.values[i]) << ','
                << detail::format_real(result.fit.residuals_v[i]) << ','
                << detail::format_real(phi_x) << ',' << (interior ? 1 : 0) << ',';
            if (t >= 2) out << detail::format_real(result.fit.residuals_e[static_cast<size_t>(t - 2)]);
            out << '\n';
        }
        result.files_written.push_back(out_path("curves.csv"));
    }

    {  // diagnostics.json
        JsonWriter w;
        w.begin_object();
        w.kv("sample_size", T);
        w.kv("kernel", kernel_name(cfg.kernel));
        w.kv("bandwidth_mode", cfg.bandwidth_mode == BandwidthMode::CV ? "cv" : "fixed");
        w.key("bandwidths").begin_object();
        w.kv("h", result.h).kv("v", result.v).kv("interior_margin", result.b);
        w.end_object();
        w.kv("lambda_floor", result.fit.g_hat.lambda_floor);
        w.kv("phi_clamped_outside", result.fit.phi_clamped_outside);
        w.kv("units", cfg.units);
        w.kv("seed", static_cast<long>(cfg.seed));
        if (cfg.deseasonalize) {
            w.key("seasonal").begin_object();
            w.key("periods").value(cfg.harmonics);
            w.key("coefficients").value(seasonal_coeffs);
            w.end_object();
        }
        if (cfg.drift_rate_per_year != 0.0) {
            w.key("drift").begin_object();
            w.kv("rate_per_year", cfg.drift_rate_per_year);
            w.kv("epoch", cfg.drift_epoch.value_or(ingest.timestamps.front()));
            w.end_object();
        }
        if (!result.cv_curve.empty()) {
            w.key("cv_curve").begin_array();
            for (const CvPoint& p : result.cv_curve) {
                w.begin_object();
                w.kv("h", p.h);
                if (p.feasible) w.kv("score", p.score);
                w.kv("feasible", p.feasible);
                w.end_object();
            }
            w.end_array();
        }
        auto write_diag = [&](const char* key, const DiagnosticsReport& rep, bool with_bic,
                              bool with_lb) {
            w.key(key).begin_object();
            w.key("acf").value(rep.acf);
            w.key("pacf").value(rep.pacf);
            w.kv("bartlett_band", rep.bartlett_band);
            if (with_bic) {
                w.key("bic_grid").begin_array();
                for (const auto& row : rep.bic_grid) w.value(row);
                w.end_array();
                w.key("best_order").begin_object();
                w.kv("p", rep.best_order.p).kv("q", rep.best_order.q);
                w.end_object();
            }
            if (with_lb) {
                w.key("ljung_box").begin_array();
                for (const LjungBoxRow& row : rep.ljung_box) {
                    w.begin_object();
                    w.kv("lag", row.lag).kv("q", row.q).kv("p_value", row.p_value);
                    w.end_object();
                }
                w.end_array();
            }
            w.end_object();
        };
        write_diag("trend_residuals", result.trend_residual_diag, true, false);
        write_diag("final_residuals", result.final_residual_diag, false, true);
        w.end_object();

        std::ofstream out(out_path("diagnostics.json"), std::ios::binary);
        if (!out) throw DataError("cannot write " + out_path("diagnostics.json"));
        out << w.str() << '\n';
        result.files_written.push_back(out_path("diagnostics.json"));
    }

    {  // plots
        SvgChart chart("series and fitted trend", "time", cfg.units.empty() ? "value" : cfg.units);
        chart.add_line("y", ingest.timestamps, series.values, "#777777", 1.0);
        chart.add_line("g_hat", ingest.timestamps, result.fit.g_hat.values, "#1f77b4", 2.0, true);
        chart.write(out_path("series.svg"));
        result.files_written.push_back(out_path("series.svg"));

        std::vector<double> phi_times;
        for (const double x : result.fit.phi_hat.grid) {
            const size_t i = static_cast<size_t>(std::lround(x * static_cast<double>(T))) - 1;
            phi_times.push_back(ingest.timestamps[i]);
        }
        SvgChart phi_chart("autoregressive coefficient", "time", "phi_hat");
        phi_chart.add_line("phi_hat", phi_times, result.fit.phi_hat.values, "#d62728", 2.0);
        phi_chart.write(out_path("phi.svg"));
        result.files_written.push_back(out_path("phi.svg"));

        auto stem_chart = [&](const std::string& file, const std::string& title,
                              const std::vector<double>& values, double band) {
            std::vector<double> lags(values.size());
            for (size_t k = 0; k < values.size(); ++k) lags[k] = static_cast<double>(k + 1);
            SvgChart c(title, "lag", "correlation");
            c.add_hline(band, "#1f77b4");
            c.add_hline(-band, "#1f77b4");
            c.add_hline(0.0, "#000000", false);
            c.add_stems(title, lags, values, "#333333");
            c.write(out_path(file));
            result.files_written.push_back(out_path(file));
        };
        stem_chart("acf_trend_residuals.svg", "acf_v_hat", result.trend_residual_diag.acf,
                   result.trend_residual_diag.bartlett_band);
        stem_chart("pacf_trend_residuals.svg", "pacf_v_hat", result.trend_residual_diag.pacf,
                   result.trend_residual_diag.bartlett_band);
        stem_chart("acf_final_residuals.svg", "acf_e_hat", result.final_residual_diag.acf,
                   result.final_residual_diag.bartlett_band);
        stem_chart("pacf_final_residuals.svg", "pacf_e_hat", result.final_residual_diag.pacf,
                   result.final_residual_diag.bartlett_band);
    }

    return result;
}

}  // namespace tvreg
