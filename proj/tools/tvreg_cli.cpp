// Command line front end: simulation, fitting, bandwidth selection, the
// Monte Carlo and rate-check harnesses, residual diagnostics and the full
// reporting pipeline.
//
// Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tvreg/tvreg.hpp"

namespace fs = std::filesystem;
using namespace tvreg;

namespace {

struct GlobalOpts {
    std::uint64_t seed = 1;
    int threads = 1;
    std::string output = ".";
    std::string config_path;
};

std::string out_file(const GlobalOpts& g, const std::string& name) {
    fs::create_directories(g.output);
    return (fs::path(g.output) / name).string();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    out << text;
}

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// ---- simulate -------------------------------------------------------------

struct SimulateOpts {
    long T = 383;
    double sigma2 = 1.0;
    std::optional<double> phi_const;
    bool zero_trend = false;
    double seasonal_amplitude = 0.0;
    double seasonal_period = 12.0;
    double time_start = 0.0;
    double time_step = 1.0;
    std::string out_name = "simulated.csv";
};

int cmd_simulate(const GlobalOpts& g, const SimulateOpts& o) {
    TvarModel model = benchmark_model(o.sigma2);
    if (o.zero_trend) model.trend = [](double) { return 0.0; };
    if (o.phi_const) {
        const double phi = *o.phi_const;
        model.ar_coef = [phi](double) { return phi; };
        model.phi_bound = std::min(0.999, std::abs(phi) + 1e-6);
    }
    const DesignSeries series = simulate(model, o.T, g.seed);

    std::string csv = "time,value\n";
    for (long t = 0; t < o.T; ++t) {
        double value = series.values[static_cast<size_t>(t)];
        if (o.seasonal_amplitude != 0.0)
            value += o.seasonal_amplitude *
                     std::sin(2.0 * std::numbers::pi * static_cast<double>(t + 1) / o.seasonal_period);
        csv += format_real(o.time_start + o.time_step * static_cast<double>(t));
        csv += ',';
        csv += format_real(value);
        csv += '\n';
    }
    const std::string path = out_file(g, o.out_name);
    write_text(path, csv);
    std::cout << path << "\n";
    return 0;
}

// ---- fit / cv / diagnose ----------------------------------------------------

struct IoOpts {
    std::string input;
    std::string time_column = "time";
    std::string value_column = "value";
    std::string kernel = "epanechnikov";
};

struct FitOpts {
    std::optional<double> h, v, b;
};

int cmd_fit(const GlobalOpts& g, const IoOpts& io, const FitOpts& fo) {
    PipelineConfig cfg;
    cfg.input_path = io.input;
    cfg.time_column = io.time_column;
    cfg.value_column = io.value_column;
    cfg.kernel = kernel_from_name(io.kernel);
    cfg.bandwidth_mode = fo.h ? BandwidthMode::Fixed : BandwidthMode::CV;
    cfg.h = fo.h;
    cfg.v = fo.v;
    cfg.b = fo.b;
    cfg.output_dir = g.output;
    cfg.seed = g.seed;
    const PipelineResult res = run_pipeline(cfg);
    std::cout << "h=" << format_real(res.h) << " v=" << format_real(res.v)
              << " b=" << format_real(res.b) << "\n";
    for (const std::string& f : res.files_written) std::cout << f << "\n";
    return 0;
}

struct CvOpts {
    std::vector<double> h_grid;
    long v_block = -1;
    long h_gap = -1;
    long stride = -1;
};

int cmd_cv(const GlobalOpts& g, const IoOpts& io, const CvOpts& co) {
    const IngestResult ingest = ingest_csv(io.input, io.time_column, io.value_column);
    CvConfig cfg;
    cfg.h_grid = co.h_grid;
    cfg.v_block = co.v_block;
    cfg.h_gap = co.h_gap;
    cfg.subsample_stride = co.stride;
    const KernelSpec spec = make_kernel(kernel_from_name(io.kernel));
    const std::vector<CvPoint> curve = cv_curve(ingest.series, spec, cfg);

    double best_h = 0.0, best_score = 0.0;
    bool found = false;
    for (const CvPoint& p : curve) {
        if (!p.feasible) continue;
        if (!found || p.score <= best_score) {
            best_h = p.h;
            best_score = p.score;
            found = true;
        }
    }
    if (!found) throw NoFeasibleBandwidthError("every candidate bandwidth was infeasible");

    JsonWriter w;
    w.begin_object();
    w.kv("selected_h", best_h);
    w.key("curve").begin_array();
    for (const CvPoint& p : curve) {
        w.begin_object();
        w.kv("h", p.h);
        if (p.feasible) w.kv("score", p.score);
        w.kv("feasible", p.feasible);
        w.end_object();
    }
    w.end_array();
    w.end_object();
    const std::string path = out_file(g, "cv.json");
    write_text(path, w.str() + "\n");
    std::cout << w.str() << "\n";
    return 0;
}

struct DiagnoseOpts {
    int max_lag = 30;
    std::vector<int> lags = {5, 8, 10, 13, 15, 18, 20, 23, 25, 28, 30};
    bool bic = true;
};

int cmd_diagnose(const GlobalOpts& g, const IoOpts& io, const DiagnoseOpts& d) {
    const IngestResult ingest = ingest_csv(io.input, io.time_column, io.value_column);
    const DiagnosticsReport rep = diagnose(ingest.series.values, d.max_lag, d.lags, d.bic);

    JsonWriter w;
    w.begin_object();
    w.key("acf").value(rep.acf);
    w.key("pacf").value(rep.pacf);
    w.kv("bartlett_band", rep.bartlett_band);
    w.key("ljung_box").begin_array();
    for (const LjungBoxRow& row : rep.ljung_box) {
        w.begin_object();
        w.kv("lag", row.lag).kv("q", row.q).kv("p_value", row.p_value);
        w.end_object();
    }
    w.end_array();
    if (d.bic) {
        w.key("bic_grid").begin_array();
        for (const auto& row : rep.bic_grid) w.value(row);
        w.end_array();
        w.key("best_order").begin_object();
        w.kv("p", rep.best_order.p).kv("q", rep.best_order.q);
        w.end_object();
    }
    w.end_object();
    const std::string path = out_file(g, "diagnostics.json");
    write_text(path, w.str() + "\n");
    std::cout << w.str() << "\n";
    return 0;
}

// ---- mc-table1 / rate-check / theta ----------------------------------------

struct McOpts {
    std::vector<long> T_list = {100, 300, 700};
    std::vector<double> sigma2_list = {1.0, 3.0};
    int n_reps = 200;
    bool fixed = false;
    double h = 0.25;
    double v = 0.2;
};

int cmd_mc_table1(const GlobalOpts& g, const McOpts& o) {
    MonteCarloConfig cfg;
    cfg.T_list = o.T_list;
    cfg.sigma2_list = o.sigma2_list;
    cfg.n_reps = o.n_reps;
    cfg.seed_base = g.seed;
    cfg.threads = g.threads;
    cfg.bandwidth_mode = o.fixed ? BandwidthMode::Fixed : BandwidthMode::CV;
    cfg.fixed_h = o.h;
    cfg.fixed_v = o.v;
    const std::vector<MaseReport> reports = mc_table1(cfg);

    write_text(out_file(g, "mase.csv"), mase_csv(reports));

    JsonWriter w;
    w.begin_array();
    for (const MaseReport& r : reports) {
        w.begin_object();
        w.kv("t", r.T).kv("sigma2", r.sigma2).kv("n_reps", r.n_reps);
        w.kv("mase_g", r.mase_g).kv("mase_phi", r.mase_phi);
        w.key("ase_g_quantiles").begin_array();
        for (const double q : r.ase_g_quantiles) w.value(q);
        w.end_array();
        w.key("ase_phi_quantiles").begin_array();
        for (const double q : r.ase_phi_quantiles) w.value(q);
        w.end_array();
        w.kv("seed_base", static_cast<long>(r.seed_base));
        w.end_object();
    }
    w.end_array();
    write_text(out_file(g, "mase.json"), w.str() + "\n");

    std::printf("%6s %8s %12s %12s\n", "T", "sigma2", "mase_g", "mase_phi");
    for (const MaseReport& r : reports)
        std::printf("%6ld %8.3g %12.4g %12.4g\n", r.T, r.sigma2, r.mase_g, r.mase_phi);
    return 0;
}

struct RateOpts {
    std::string process = "iid";
    double phi = 0.75;
    int j = 0;
    std::vector<long> T_list = {500, 1000, 2000, 4000, 8000};
    int n_reps = 100;
};

int cmd_rate_check(const GlobalOpts& g, const RateOpts& o) {
    RateCheckConfig cfg;
    if (o.process == "iid") cfg.process = ProcessKind::IID;
    else if (o.process == "ar1") cfg.process = ProcessKind::AR1;
    else throw InvalidParamsError("process must be iid or ar1");
    cfg.ar_coef = o.phi;
    cfg.j = o.j;
    cfg.T_list = o.T_list;
    cfg.n_reps = o.n_reps;
    cfg.seed = g.seed;
    cfg.threads = g.threads;
    const SlopeReport rep = verify_rate(cfg);

    JsonWriter w;
    w.begin_object();
    w.kv("slope", rep.slope).kv("r_squared", rep.r_squared);
    w.key("t_list").begin_array();
    for (const long T : rep.T) w.value(T);
    w.end_array();
    w.key("rate_target").value(rep.target);
    w.key("median_sup").value(rep.median_sup);
    w.end_object();
    write_text(out_file(g, "rate_check.json"), w.str() + "\n");
    std::cout << w.str() << "\n";
    return 0;
}

struct ThetaOpts {
    double beta = 10.0;
    double s = 4.0;
    int m = 0;
    double c = 1.0;
    double lambda = 0.0;
    std::string mode = "prob";
};

int cmd_theta(const ThetaOpts& o) {
    RateParams p;
    p.beta = o.beta;
    p.s = o.s;
    p.m = o.m;
    p.c = o.c;
    p.lambda = o.lambda;
    if (o.mode == "prob") p.mode = RateMode::InProbability;
    else if (o.mode == "as") p.mode = RateMode::AlmostSure;
    else throw InvalidParamsError("mode must be prob or as");
    const ThetaResult r = theta(p);

    JsonWriter w;
    w.begin_object();
    w.kv("theta", r.theta);
    w.kv("beta_lower_bound", r.beta_lower_bound);
    w.kv("admissible", r.admissible);
    w.end_object();
    std::cout << w.str() << "\n";
    return 0;
}

// ---- pipeline ---------------------------------------------------------------

struct PipelineOpts {
    std::string input;
    std::string time_column = "time";
    std::string value_column = "value";
    std::string kernel = "epanechnikov";
    bool deseasonalize = false;
    std::vector<double> harmonics = {12.0, 6.0};
    double drift_rate = 0.0;
    std::optional<double> drift_epoch;
    std::string mode = "cv";
    std::optional<double> h, v, b;
    std::string units;
};

int cmd_pipeline(const GlobalOpts& g, const PipelineOpts& o) {
    PipelineConfig cfg;
    if (!g.config_path.empty()) {
        std::ifstream in(g.config_path, std::ios::binary);
        if (!in) throw DataError("cannot open config: " + g.config_path);
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        cfg = pipeline_config_from_json(text);
    }
    if (!o.input.empty()) cfg.input_path = o.input;
    if (o.time_column != "time") cfg.time_column = o.time_column;
    if (o.value_column != "value") cfg.value_column = o.value_column;
    if (o.kernel != "epanechnikov") cfg.kernel = kernel_from_name(o.kernel);
    if (o.deseasonalize) cfg.deseasonalize = true;
    if (!o.harmonics.empty()) cfg.harmonics = o.harmonics;
    if (o.drift_rate != 0.0) cfg.drift_rate_per_year = o.drift_rate;
    if (o.drift_epoch) cfg.drift_epoch = o.drift_epoch;
    if (o.mode == "fixed") cfg.bandwidth_mode = BandwidthMode::Fixed;
    if (o.h) cfg.h = o.h;
    if (o.v) cfg.v = o.v;
    if (o.b) cfg.b = o.b;
    if (!o.units.empty()) cfg.units = o.units;
    cfg.output_dir = g.output;
    cfg.seed = g.seed;
    if (cfg.input_path.empty()) throw DataError("pipeline needs an input csv (--input or config)");

    const PipelineResult res = run_pipeline(cfg);
    std::cout << "T=" << res.sample_size << " h=" << format_real(res.h) << " v=" << format_real(res.v)
              << " b=" << format_real(res.b) << "\n";
    for (const std::string& f : res.files_written) std::cout << f << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fixed-design kernel regression with time-varying autoregressive errors"};
    app.require_subcommand(1);
    // keep -h free for bandwidth options
    app.set_help_flag("--help", "print help");

    GlobalOpts g;
    auto add_sub = [&](const char* name, const char* desc) {
        CLI::App* s = app.add_subcommand(name, desc);
        s->set_help_flag("--help", "print help");
        s->fallthrough();  // global flags may follow the subcommand
        return s;
    };
    app.add_option("--seed", g.seed, "base random seed");
    app.add_option("--threads", g.threads, "worker threads (0 = hardware)");
    app.add_option("--output", g.output, "output directory");
    app.add_option("--config", g.config_path, "json config file (pipeline)");

    SimulateOpts so;
    CLI::App* sim = add_sub("simulate", "simulate the benchmark model to csv");
    sim->add_option("--T", so.T, "sample size");
    sim->add_option("--sigma2", so.sigma2, "innovation variance");
    double phi_const_val = 0.0;
    CLI::Option* phi_opt = sim->add_option("--phi-const", phi_const_val, "use a constant AR coefficient");
    sim->add_flag("--zero-trend", so.zero_trend, "drop the trend component");
    sim->add_option("--seasonal-amplitude", so.seasonal_amplitude, "add a sine seasonal component");
    sim->add_option("--seasonal-period", so.seasonal_period, "seasonal period in samples");
    sim->add_option("--time-start", so.time_start, "first timestamp");
    sim->add_option("--time-step", so.time_step, "timestamp increment");
    sim->add_option("--out-name", so.out_name, "output file name");

    IoOpts fit_io;
    FitOpts fo;
    CLI::App* fit = add_sub("fit", "two-step fit of trend and AR coefficient");
    fit->add_option("--input", fit_io.input, "input csv")->required();
    fit->add_option("--time-column", fit_io.time_column, "time column name");
    fit->add_option("--value-column", fit_io.value_column, "value column name");
    fit->add_option("--kernel", fit_io.kernel, "kernel family");
    double fit_h = 0, fit_v = 0, fit_b = 0;
    CLI::Option* fit_h_opt = fit->add_option("--h", fit_h, "trend bandwidth (omit to cross-validate)");
    CLI::Option* fit_v_opt = fit->add_option("--v", fit_v, "AR bandwidth");
    CLI::Option* fit_b_opt = fit->add_option("--b", fit_b, "interior margin");

    IoOpts cv_io;
    CvOpts co;
    CLI::App* cv = add_sub("cv", "hv-block cross-validation curve");
    cv->add_option("--input", cv_io.input, "input csv")->required();
    cv->add_option("--time-column", cv_io.time_column, "time column name");
    cv->add_option("--value-column", cv_io.value_column, "value column name");
    cv->add_option("--kernel", cv_io.kernel, "kernel family");
    cv->add_option("--h-grid", co.h_grid, "candidate bandwidths");
    cv->add_option("--v-block", co.v_block, "validation half-width in observations");
    cv->add_option("--h-gap", co.h_gap, "deleted flank half-width in observations");
    cv->add_option("--stride", co.stride, "evaluate every k-th center");

    IoOpts diag_io;
    DiagnoseOpts dg;
    CLI::App* diag = add_sub("diagnose", "acf/pacf, Ljung-Box and ARMA BIC grid");
    diag->add_option("--input", diag_io.input, "input csv")->required();
    diag->add_option("--time-column", diag_io.time_column, "time column name");
    diag->add_option("--value-column", diag_io.value_column, "value column name");
    diag->add_option("--max-lag", dg.max_lag, "acf/pacf lags");
    diag->add_option("--lags", dg.lags, "Ljung-Box lags");
    diag->add_flag("!--no-bic", dg.bic, "skip the ARMA BIC grid");

    McOpts mo;
    CLI::App* mc = add_sub("mc-table1", "Monte Carlo MASE study on the benchmark model");
    mc->add_option("--T-list", mo.T_list, "sample sizes");
    mc->add_option("--sigma2-list", mo.sigma2_list, "innovation variances");
    mc->add_option("--n-reps", mo.n_reps, "replications per cell");
    mc->add_flag("--fixed", mo.fixed, "fixed bandwidths instead of cross-validation");
    mc->add_option("--h", mo.h, "fixed trend bandwidth");
    mc->add_option("--v", mo.v, "fixed AR bandwidth");

    RateOpts ro;
    CLI::App* rate = add_sub("rate-check", "empirical uniform-rate slope check");
    rate->add_option("--process", ro.process, "iid or ar1");
    rate->add_option("--phi", ro.phi, "ar1 coefficient");
    rate->add_option("--j", ro.j, "polynomial order of the kernel average");
    rate->add_option("--T-list", ro.T_list, "sample sizes");
    rate->add_option("--n-reps", ro.n_reps, "replications per sample size");

    ThetaOpts to;
    CLI::App* th = add_sub("theta", "bandwidth-admissibility exponent");
    th->add_option("--beta", to.beta, "mixing decay exponent");
    th->add_option("--s", to.s, "moment order");
    th->add_option("--m", to.m, "parameter dimension");
    th->add_option("--c", to.c, "expansion constant");
    th->add_option("--lambda", to.lambda, "moment growth exponent");
    th->add_option("--mode", to.mode, "prob or as");

    PipelineOpts po;
    CLI::App* pipe = add_sub("pipeline", "ingest, preprocess, fit, diagnose, report");
    pipe->add_option("--input", po.input, "input csv");
    pipe->add_option("--time-column", po.time_column, "time column name");
    pipe->add_option("--value-column", po.value_column, "value column name");
    pipe->add_option("--kernel", po.kernel, "kernel family");
    pipe->add_flag("--deseasonalize", po.deseasonalize, "remove harmonic seasonal components");
    pipe->add_option("--harmonics", po.harmonics, "seasonal periods in samples");
    pipe->add_option("--drift-rate", po.drift_rate, "linear drift per year to subtract");
    double drift_epoch_val = 0.0;
    CLI::Option* epoch_opt = pipe->add_option("--drift-epoch", drift_epoch_val, "drift reference epoch");
    pipe->add_option("--mode", po.mode, "cv or fixed");
    double pipe_h = 0, pipe_v = 0, pipe_b = 0;
    CLI::Option* pipe_h_opt = pipe->add_option("--h", pipe_h, "trend bandwidth");
    CLI::Option* pipe_v_opt = pipe->add_option("--v", pipe_v, "AR bandwidth");
    CLI::Option* pipe_b_opt = pipe->add_option("--b", pipe_b, "interior margin");
    pipe->add_option("--units", po.units, "unit annotation for reports");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*phi_opt) so.phi_const = phi_const_val;
        if (*fit_h_opt) fo.h = fit_h;
        if (*fit_v_opt) fo.v = fit_v;
        if (*fit_b_opt) fo.b = fit_b;
        if (*epoch_opt) po.drift_epoch = drift_epoch_val;
        if (*pipe_h_opt) po.h = pipe_h;
        if (*pipe_v_opt) po.v = pipe_v;
        if (*pipe_b_opt) po.b = pipe_b;

        if (sim->parsed()) return cmd_simulate(g, so);
        if (fit->parsed()) return cmd_fit(g, fit_io, fo);
        if (cv->parsed()) return cmd_cv(g, cv_io, co);
        if (diag->parsed()) return cmd_diagnose(g, diag_io, dg);
        if (mc->parsed()) return cmd_mc_table1(g, mo);
        if (rate->parsed()) return cmd_rate_check(g, ro);
        if (th->parsed()) return cmd_theta(to);
        if (pipe->parsed()) return cmd_pipeline(g, po);
        std::cerr << "no subcommand selected\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const NumericError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 4;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
}
