#include "gar/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gar/backtest.hpp"
#include "gar/baseline.hpp"
#include "gar/dataset.hpp"
#include "gar/errors.hpp"
#include "gar/extreme.hpp"
#include "gar/math.hpp"
#include "gar/simulation.hpp"
#include "gar/svg.hpp"
#include "gar/threshold.hpp"

namespace gar {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// probability levels are user-supplied labels; print them short
std::string fmt_level(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

struct InputOptions {
    std::string path;
    std::string timestamp_col;
    std::string response_col;
    std::vector<std::string> covariate_cols;
    int horizon = 4;
};

void add_input_options(CLI::App* cmd, InputOptions& in) {
    cmd->add_option("--input", in.path, "input CSV path")->required();
    cmd->add_option("--horizon", in.horizon, "forecast horizon h (periods ahead)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--timestamp-col", in.timestamp_col, "timestamp column name");
    cmd->add_option("--response-col", in.response_col, "response column name");
    cmd->add_option("--covariate", in.covariate_cols, "covariate column name (repeatable)");
}

TimeSeriesDataset load_input(const InputOptions& in) {
    CsvSchema schema;
    schema.timestamp = in.timestamp_col;
    schema.response = in.response_col;
    schema.covariates = in.covariate_cols;
    return load_dataset(in.path, schema);
}

Eigen::VectorXd resolve_x0(const std::string& text, const PredictorResponsePairs& pairs) {
    Eigen::Index d = pairs.covariate_dim();
    if (text.empty() || text == "sample-mean") {
        return pairs.x.rightCols(d).colwise().mean().transpose();
    }
    if (text == "sample-median") {
        Eigen::VectorXd x0(d);
        for (Eigen::Index j = 0; j < d; ++j) {
            Eigen::VectorXd col = pairs.x.col(j + 1);
            x0[j] = math::median(std::vector<double>(col.data(), col.data() + col.size()));
        }
        return x0;
    }
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            values.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw UsageError("--x0 expects 'sample-mean', 'sample-median' or comma-separated "
                             "numbers; got '" + text + "'");
        }
    }
    if (static_cast<Eigen::Index>(values.size()) != d) {
        throw UsageError("--x0 has " + std::to_string(values.size()) + " entries but the data has " +
                         std::to_string(d) + " covariates");
    }
    return Eigen::Map<Eigen::VectorXd>(values.data(), d);
}

void write_text(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write output file: " + path.string());
    out << content;
}

TailSide parse_side(const std::string& s) {
    if (s == "upper") return TailSide::Upper;
    if (s == "lower") return TailSide::Lower;
    throw UsageError("--tail must be 'upper' or 'lower'");
}

void check_probability(double v, const std::string& flag) {
    if (!(v > 0.0 && v < 1.0)) {
        throw UsageError(flag + " must lie strictly between 0 and 1 (got " + fmt(v) + ")");
    }
}

DgpSpec parse_design(const std::string& name) {
    if (name == "quarter") return DgpSpec::quarter_ahead();
    if (name == "year") return DgpSpec::year_ahead();
    throw UsageError("--design must be 'quarter' or 'year'");
}

// ---------------------------------------------------------------- fit ----

struct FitArgs {
    InputOptions in;
    std::string tail = "lower";
    std::vector<double> taus;
    double pi = 0.05;
    bool pi_explicit = false;
    double threshold_quantile = 0.0;
    bool search_threshold = false;
    double bandwidth_scale = 1.0;
    std::string x0 = "sample-mean";
    std::string out_dir = ".";
};

int run_fit(const FitArgs& a) {
    TimeSeriesDataset data = load_input(a.in);
    PredictorResponsePairs pairs = align_horizon(data, a.in.horizon);
    TailSide side = parse_side(a.tail);
    Eigen::VectorXd x0 = resolve_x0(a.x0, pairs);

    std::vector<double> taus = a.taus;
    if (taus.empty()) taus.push_back(side == TailSide::Lower ? 0.05 : 0.95);
    for (double tau : taus) check_probability(tau, "--tau");
    check_probability(a.pi, "--pi");

    double threshold;
    if (a.search_threshold) {
        threshold = select_threshold(pairs, side).chosen;
    } else {
        double q = a.threshold_quantile;
        if (q == 0.0) q = side == TailSide::Upper ? 0.90 : 0.10;
        check_probability(q, "--threshold-quantile");
        std::vector<double> ys(pairs.y.data(), pairs.y.data() + pairs.y.size());
        threshold = math::empirical_quantile(ys, q);
    }

    TailFit fit = fit_tail_index(pairs, side, threshold);
    KernelSpec kspec = bandwidth_rule(pairs, a.bandwidth_scale);

    std::ostringstream csv;
    csv << "statistic,level,estimate,se,v_at_x0,cdf_at_threshold,effective_n,threshold,"
           "median,warning\n";
    auto emit = [&](const std::string& stat, double level, const EstimateWithSE& e) {
        csv << stat << ',' << fmt_level(level) << ',' << fmt(e.estimate) << ',' << fmt(e.se) << ','
            << fmt(e.v_at_x0) << ',' << fmt(e.cdf_at_threshold) << ',' << fmt(e.effective_n)
            << ',' << fmt(fit.threshold) << ',' << fmt(fit.median) << ','
            << (e.near_nonexistence ? "near-nonexistent-moment" : "") << '\n';
    };
    for (double tau : taus) {
        emit("quantile", tau, extreme_quantile(fit, pairs, x0, tau, kspec));
    }
    const char* tail_stat =
        side == TailSide::Upper ? "expected_longrise" : "expected_shortfall";
    try {
        double tau_edge = side == TailSide::Upper ? 1.0 - a.pi : a.pi;
        EstimateWithSE q = extreme_quantile(fit, pairs, x0, tau_edge, kspec);
        emit(tail_stat, a.pi, expected_tail(fit, q, x0));
    } catch (const NumericError&) {
        // the default expected-tail row degrades to a marker; an explicit
        // --pi request propagates the failure
        if (a.pi_explicit) throw;
        csv << tail_stat << ',' << fmt_level(a.pi) << ",nan,nan," << fmt(tail_exponent_at(fit, x0))
            << ",nan,nan," << fmt(fit.threshold) << ',' << fmt(fit.median)
            << ",tail-moment-does-not-exist\n";
    }
    write_text(std::filesystem::path(a.out_dir) / "estimates.csv", csv.str());
    return 0;
}

// --------------------------------------------------- select-threshold ----

struct SelectArgs {
    InputOptions in;
    std::string tail = "lower";
    std::vector<double> grid;
    int min_exceed = 0;
    std::string out_dir = ".";
};

int run_select(const SelectArgs& a) {
    TimeSeriesDataset data = load_input(a.in);
    PredictorResponsePairs pairs = align_horizon(data, a.in.horizon);
    ThresholdSearchOptions opts;
    opts.grid_quantiles = a.grid;
    opts.min_exceed = a.min_exceed;
    ThresholdSearchResult r = select_threshold(pairs, parse_side(a.tail), opts);

    std::ostringstream csv;
    csv << "level,threshold,discrepancy,tail_size,admissible,chosen\n";
    for (std::size_t i = 0; i < r.grid.size(); ++i) {
        csv << fmt_level(r.levels[i]) << ',' << fmt(r.grid[i]) << ',' << fmt(r.discrepancies[i]) << ','
            << r.tail_sizes[i] << ',' << (r.admissible[i] ? 1 : 0) << ','
            << (i == r.chosen_index ? 1 : 0) << '\n';
    }
    write_text(std::filesystem::path(a.out_dir) / "threshold_search.csv", csv.str());
    return 0;
}

// ----------------------------------------------------------- baseline ----

struct BaselineArgs {
    InputOptions in;
    std::vector<double> taus;
    double pi = 0.0;
    bool want_pi = false;
    std::string x0 = "sample-mean";
    std::string out_dir = ".";
};

int run_baseline(const BaselineArgs& a) {
    TimeSeriesDataset data = load_input(a.in);
    PredictorResponsePairs pairs = align_horizon(data, a.in.horizon);
    Eigen::VectorXd x0 = resolve_x0(a.x0, pairs);
    for (double tau : a.taus) check_probability(tau, "--tau");
    if (a.want_pi) check_probability(a.pi, "--pi");

    SkewTParams theta = baseline_fit_at(pairs, x0);
    SkewTDist dist(theta);

    std::ostringstream csv;
    csv << "statistic,level,value\n";
    csv << "mu,," << fmt(theta.mu) << '\n';
    csv << "sigma,," << fmt(theta.sigma) << '\n';
    csv << "alpha,," << fmt(theta.alpha) << '\n';
    csv << "nu,," << fmt(theta.nu) << '\n';
    for (double tau : a.taus) {
        csv << "quantile," << fmt_level(tau) << ',' << fmt(dist.quantile(tau)) << '\n';
    }
    if (a.want_pi) {
        csv << "expected_shortfall," << fmt_level(a.pi) << ','
            << fmt(dist.expected_tail(a.pi, TailSide::Lower)) << '\n';
        csv << "expected_longrise," << fmt_level(a.pi) << ','
            << fmt(dist.expected_tail(a.pi, TailSide::Upper)) << '\n';
    }
    write_text(std::filesystem::path(a.out_dir) / "baseline.csv", csv.str());
    return 0;
}

// ----------------------------------------------------------- simulate ----

struct SimulateArgs {
    std::string design = "quarter";
    Eigen::Index t = 300;
    std::uint64_t seed = 0;
    std::string out_dir = ".";
};

int run_simulate(const SimulateArgs& a) {
    DgpSpec spec = parse_design(a.design);
    PredictorResponsePairs pairs = sample_dataset(spec, a.t, a.seed);

    TimeSeriesDataset data;
    data.timestamp_name = "t";
    data.response_name = "y";
    data.covariate_names = {"x1", "x2"};
    data.y = pairs.y;
    data.x = pairs.x.rightCols(2);
    char buf[32];
    for (Eigen::Index i = 0; i < pairs.n_pairs(); ++i) {
        std::snprintf(buf, sizeof(buf), "%06lld", static_cast<long long>(i + 1));
        data.timestamps.emplace_back(buf);
    }
    write_text(std::filesystem::path(a.out_dir) / "simulated.csv", dataset_to_csv(data));
    return 0;
}

// ----------------------------------------------------------------- mc ----

struct McArgs {
    std::string design = "quarter";
    std::vector<double> taus;
    double pi = 0.0;
    bool want_pi = false;
    std::vector<Eigen::Index> sizes;
    int reps = 200;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string methods = "both";
    double bandwidth_scale = 1.0;
    std::string out_dir = ".";
};

int run_mc(const McArgs& a) {
    DgpSpec spec = parse_design(a.design);
    McConfig config;
    config.reps = a.reps;
    config.seed = a.seed;
    config.threads = a.threads;
    config.bandwidth_scale = a.bandwidth_scale;
    config.run_new = a.methods != "old";
    config.run_old = a.methods != "new";
    config.sample_sizes = a.sizes.empty() ? std::vector<Eigen::Index>{150, 300} : a.sizes;

    std::vector<double> taus = a.taus;
    if (taus.empty()) taus = {0.01, 0.02, 0.03, 0.04, 0.05, 0.95, 0.96, 0.97, 0.98, 0.99};
    for (double tau : taus) {
        check_probability(tau, "--tau");
        config.targets.push_back({McTarget::Kind::Quantile, tau});
    }
    if (a.want_pi) {
        check_probability(a.pi, "--pi");
        config.targets.push_back({McTarget::Kind::Shortfall, a.pi});
        config.targets.push_back({McTarget::Kind::Longrise, a.pi});
    }

    McSummary summary = run_monte_carlo(spec, config);
    write_text(std::filesystem::path(a.out_dir) / "mc_summary.csv", mc_summary_to_csv(summary));

    // One figure per sample size: means with interquartile bars per method,
    // truth as triangles, quantile targets only (tail targets have no
    // common x axis).
    for (Eigen::Index t_size : config.sample_sizes) {
        svg::Chart chart;
        chart.title = "simulated quantile estimates, " + a.design + " design, T=" +
                      std::to_string(t_size);
        chart.x_label = "quantile level";
        chart.y_label = "estimate";
        svg::Series s_new{{}, {}, "#000000", "new", false, true, "circle"};
        svg::Series s_old{{}, {}, "#999999", "old", false, true, "circle"};
        svg::Series s_true{{}, {}, "#cc3333", "truth", false, true, "triangle"};
        for (const auto& row : summary.rows) {
            if (row.sample_size != t_size || row.target[0] != 'q') continue;
            double tau = std::stod(row.target.substr(1));
            double dx = row.method == "new" ? -0.0006 : 0.0006;
            svg::Series& s = row.method == "new" ? s_new : s_old;
            s.x.push_back(tau + dx);
            s.y.push_back(row.mean);
            chart.bars.push_back({tau + dx, row.iqr_lo, row.iqr_hi,
                                  row.method == "new" ? "#000000" : "#999999"});
            if (row.method != "old") {
                s_true.x.push_back(tau);
                s_true.y.push_back(row.truth);
            }
        }
        chart.series = {s_new, s_old, s_true};
        std::string name = "mc_" + a.design + "_T" + std::to_string(t_size) + ".svg";
        write_text(std::filesystem::path(a.out_dir) / name, svg::render(chart));
    }
    return 0;
}

// ------------------------------------------------------------ backtest ----

struct BacktestArgs {
    InputOptions in;
    Eigen::Index min_train = 32;
    double tau_low = 0.05;
    double tau_high = 0.95;
    std::string methods = "both";
    bool fixed_thresholds = false;
    double upper_q = 0.90;
    double lower_q = 0.10;
    double bandwidth_scale = 1.0;
    int threads = 1;
    std::string out_dir = ".";
};

int run_backtest(const BacktestArgs& a) {
    check_probability(a.tau_low, "--tau-low");
    check_probability(a.tau_high, "--tau-high");
    TimeSeriesDataset data = load_input(a.in);

    BacktestConfig config;
    config.tau_low = a.tau_low;
    config.tau_high = a.tau_high;
    config.run_new = a.methods != "old";
    config.run_old = a.methods != "new";
    config.select_thresholds = !a.fixed_thresholds;
    config.upper_threshold_quantile = a.upper_q;
    config.lower_threshold_quantile = a.lower_q;
    config.bandwidth_scale = a.bandwidth_scale;
    config.threads = a.threads;

    BacktestReport report = expanding_backtest(data, a.in.horizon, a.min_train, config);
    CoverageTable table = coverage_table(report);
    write_text(std::filesystem::path(a.out_dir) / "backtest.csv", backtest_report_to_csv(report));
    write_text(std::filesystem::path(a.out_dir) / "coverage.csv", coverage_table_to_csv(table));

    auto band_chart = [&](const std::string& method, auto low_of, auto high_of, auto ok_of) {
        svg::Chart chart;
        chart.title = "expanding backtest, " + method + " method";
        chart.x_label = "prediction window";
        chart.y_label = data.response_name;
        svg::Band band;
        band.color = method == "new" ? "#8888cc" : "#bbbbbb";
        svg::Series realized{{}, {}, "#000000", "realized", true, false, "circle"};
        for (std::size_t i = 0; i < report.rows.size(); ++i) {
            const auto& r = report.rows[i];
            realized.x.push_back(static_cast<double>(i));
            realized.y.push_back(r.realized);
            if (ok_of(r)) {
                band.x.push_back(static_cast<double>(i));
                band.lo.push_back(low_of(r));
                band.hi.push_back(high_of(r));
            }
        }
        chart.bands.push_back(band);
        chart.series.push_back(realized);
        write_text(std::filesystem::path(a.out_dir) / ("backtest_" + method + ".svg"),
                   svg::render(chart));
    };
    if (config.run_new) {
        band_chart("new", [](const BacktestRow& r) { return r.q_low_new; },
                   [](const BacktestRow& r) { return r.q_high_new; },
                   [](const BacktestRow& r) { return r.new_ok; });
    }
    if (config.run_old) {
        band_chart("old", [](const BacktestRow& r) { return r.q_low_old; },
                   [](const BacktestRow& r) { return r.q_high_old; },
                   [](const BacktestRow& r) { return r.old_ok; });
    }
    return 0;
}

// ------------------------------------------------------------ scenario ----

struct ScenarioArgs {
    InputOptions in;
    std::string tail = "lower";
    std::string x0;
    double grid_min = 0.0;
    double grid_max = 0.0;
    int grid_points = 200;
    bool fixed_thresholds = false;
    double bandwidth_scale = 1.0;
    std::string out_dir = ".";
};

int run_scenario(const ScenarioArgs& a) {
    TimeSeriesDataset data = load_input(a.in);
    PredictorResponsePairs pairs = align_horizon(data, a.in.horizon);
    TailSide side = parse_side(a.tail);
    Eigen::VectorXd x0 = resolve_x0(a.x0, pairs);

    double lo = a.grid_min, hi = a.grid_max;
    if (lo == 0.0 && hi == 0.0) {
        double y_min = pairs.y.minCoeff(), y_max = pairs.y.maxCoeff();
        double span = y_max - y_min;
        if (side == TailSide::Lower) {
            lo = y_min - 0.5 * span;
            hi = math::median(std::vector<double>(pairs.y.data(), pairs.y.data() + pairs.y.size()));
        } else {
            lo = math::median(std::vector<double>(pairs.y.data(), pairs.y.data() + pairs.y.size()));
            hi = y_max + 0.5 * span;
        }
    }
    if (!(hi > lo) || a.grid_points < 2) {
        throw UsageError("--grid-min/--grid-max/--grid-points do not define a grid");
    }
    std::vector<double> grid(static_cast<std::size_t>(a.grid_points));
    for (int i = 0; i < a.grid_points; ++i) {
        grid[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (a.grid_points - 1);
    }

    BacktestConfig config;
    config.select_thresholds = !a.fixed_thresholds;
    config.bandwidth_scale = a.bandwidth_scale;
    ScenarioDensity dens = scenario_density(data, a.in.horizon, x0, side, grid, config);

    write_text(std::filesystem::path(a.out_dir) / "scenario.csv", scenario_density_to_csv(dens));

    svg::Chart chart;
    chart.title = "scenario tail densities";
    chart.x_label = data.response_name;
    chart.y_label = "density";
    chart.series.push_back({dens.grid, dens.density_old, "#999999", "old", true, false, "circle"});
    chart.series.push_back({dens.grid, dens.density_new, "#000000", "new", true, false, "circle"});
    chart.vlines.push_back({dens.marker_old, "#999999", "old marker"});
    chart.vlines.push_back({dens.marker_new, "#000000", "new marker"});
    write_text(std::filesystem::path(a.out_dir) / "scenario.svg", svg::render(chart));
    return 0;
}

}  // namespace

int run_command(const std::vector<std::string>& args) {
    CLI::App app{"tail-risk forecasting for growth-at-risk: covariate-dependent Pareto "
                 "exponents, a conditional skew-t baseline, and the harnesses that "
                 "compare them"};
    app.require_subcommand(1);
    app.set_config("--config", "", "plain key=value config file; flags override it");

    FitArgs fit_args;
    auto* fit_cmd = app.add_subcommand("fit", "fit the tail model and report extreme "
                                              "quantiles and tail expectations");
    add_input_options(fit_cmd, fit_args.in);
    fit_cmd->add_option("--tail", fit_args.tail, "which tail: lower|upper");
    fit_cmd->add_option("--tau", fit_args.taus, "quantile level (repeatable)");
    fit_cmd->add_option("--pi", fit_args.pi, "tail probability for SF/LR (default 0.05)")
        ->each([&](const std::string&) { fit_args.pi_explicit = true; });
    fit_cmd->add_option("--threshold-quantile", fit_args.threshold_quantile,
                        "empirical quantile level of the threshold");
    fit_cmd->add_flag("--select-threshold", fit_args.search_threshold,
                      "choose the threshold by the discrepancy search");
    fit_cmd->add_option("--bandwidth-scale", fit_args.bandwidth_scale, "kernel bandwidth scale");
    fit_cmd->add_option("--x0", fit_args.x0, "query covariates: sample-mean|sample-median|v1,v2,..");
    fit_cmd->add_option("--out", fit_args.out_dir, "output directory");

    SelectArgs sel_args;
    auto* sel_cmd = app.add_subcommand("select-threshold",
                                       "evaluate the threshold grid and report discrepancies");
    add_input_options(sel_cmd, sel_args.in);
    sel_cmd->add_option("--tail", sel_args.tail, "which tail: lower|upper");
    sel_cmd->add_option("--grid", sel_args.grid, "candidate quantile level (repeatable)");
    sel_cmd->add_option("--min-exceed", sel_args.min_exceed, "minimum exceedance count");
    sel_cmd->add_option("--out", sel_args.out_dir, "output directory");

    BaselineArgs base_args;
    auto* base_cmd = app.add_subcommand("baseline",
                                        "quantile-grid + skew-t baseline at a query point");
    add_input_options(base_cmd, base_args.in);
    base_cmd->add_option("--tau", base_args.taus, "quantile level to report (repeatable)");
    base_cmd->add_option("--pi", base_args.pi, "tail probability for SF/LR")
        ->each([&](const std::string&) { base_args.want_pi = true; });
    base_cmd->add_option("--x0", base_args.x0, "query covariates");
    base_cmd->add_option("--out", base_args.out_dir, "output directory");

    SimulateArgs sim_args;
    auto* sim_cmd = app.add_subcommand("simulate", "draw one dataset from a simulation design");
    sim_cmd->add_option("--design", sim_args.design, "quarter|year");
    sim_cmd->add_option("--T", sim_args.t, "sample size")->check(CLI::PositiveNumber);
    sim_cmd->add_option("--seed", sim_args.seed, "random seed")->required();
    sim_cmd->add_option("--out", sim_args.out_dir, "output directory");

    McArgs mc_args;
    auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo comparison of both methods");
    mc_cmd->add_option("--design", mc_args.design, "quarter|year");
    mc_cmd->add_option("--tau", mc_args.taus, "target quantile level (repeatable)");
    mc_cmd->add_option("--pi", mc_args.pi, "tail probability for SF/LR targets")
        ->each([&](const std::string&) { mc_args.want_pi = true; });
    mc_cmd->add_option("--T", mc_args.sizes, "sample size (repeatable)");
    mc_cmd->add_option("--reps", mc_args.reps, "replications")->check(CLI::PositiveNumber);
    mc_cmd->add_option("--seed", mc_args.seed, "random seed")->required();
    mc_cmd->add_option("--threads", mc_args.threads, "worker threads (0 = auto)");
    mc_cmd->add_option("--methods", mc_args.methods, "both|new|old");
    mc_cmd->add_option("--bandwidth-scale", mc_args.bandwidth_scale, "kernel bandwidth scale");
    mc_cmd->add_option("--out", mc_args.out_dir, "output directory");

    BacktestArgs bt_args;
    auto* bt_cmd = app.add_subcommand("backtest", "expanding-window out-of-sample evaluation");
    add_input_options(bt_cmd, bt_args.in);
    bt_cmd->add_option("--min-train", bt_args.min_train, "initial training window length");
    bt_cmd->add_option("--tau-low", bt_args.tau_low, "lower prediction quantile");
    bt_cmd->add_option("--tau-high", bt_args.tau_high, "upper prediction quantile");
    bt_cmd->add_option("--methods", bt_args.methods, "both|new|old");
    bt_cmd->add_flag("--fixed-thresholds", bt_args.fixed_thresholds,
                     "skip the per-window threshold search");
    bt_cmd->add_option("--upper-threshold-quantile", bt_args.upper_q, "fixed upper threshold");
    bt_cmd->add_option("--lower-threshold-quantile", bt_args.lower_q, "fixed lower threshold");
    bt_cmd->add_option("--bandwidth-scale", bt_args.bandwidth_scale, "kernel bandwidth scale");
    bt_cmd->add_option("--threads", bt_args.threads, "worker threads (0 = auto)");
    bt_cmd->add_option("--out", bt_args.out_dir, "output directory");

    ScenarioArgs sc_args;
    auto* sc_cmd = app.add_subcommand("scenario", "tail densities under a covariate scenario");
    add_input_options(sc_cmd, sc_args.in);
    sc_cmd->add_option("--tail", sc_args.tail, "which tail: lower|upper");
    sc_cmd->add_option("--x0", sc_args.x0, "scenario covariates")->required();
    sc_cmd->add_option("--grid-min", sc_args.grid_min, "grid lower edge");
    sc_cmd->add_option("--grid-max", sc_args.grid_max, "grid upper edge");
    sc_cmd->add_option("--grid-points", sc_args.grid_points, "grid resolution");
    sc_cmd->add_flag("--fixed-thresholds", sc_args.fixed_thresholds,
                     "use the rule-of-thumb threshold instead of the search");
    sc_cmd->add_option("--bandwidth-scale", sc_args.bandwidth_scale, "kernel bandwidth scale");
    sc_cmd->add_option("--out", sc_args.out_dir, "output directory");

    std::vector<const char*> argv;
    argv.push_back("gar");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
        if (fit_cmd->parsed()) return run_fit(fit_args);
        if (sel_cmd->parsed()) return run_select(sel_args);
        if (base_cmd->parsed()) return run_baseline(base_args);
        if (sim_cmd->parsed()) return run_simulate(sim_args);
        if (mc_cmd->parsed()) return run_mc(mc_args);
        if (bt_cmd->parsed()) return run_backtest(bt_args);
        if (sc_cmd->parsed()) return run_scenario(sc_args);
        return 2;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 3;
    } catch (const NumericError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace gar
