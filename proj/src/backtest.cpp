#include "gar/backtest.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "gar/baseline.hpp"
#include "gar/errors.hpp"
#include "gar/extreme.hpp"
#include "gar/math.hpp"
#include "gar/parallel.hpp"

namespace gar {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct TailPipeline {
    TailFit fit;
    double threshold = kNaN;
    bool ok = false;
    std::string note;
};

TailPipeline fit_one_tail(const PredictorResponsePairs& pairs, TailSide side,
                          const BacktestConfig& config) {
    TailPipeline out;
    try {
        if (config.select_thresholds) {
            out.threshold = select_threshold(pairs, side, config.search).chosen;
        } else {
            std::vector<double> ys(pairs.y.data(), pairs.y.data() + pairs.y.size());
            double q = side == TailSide::Upper ? config.upper_threshold_quantile
                                               : config.lower_threshold_quantile;
            out.threshold = math::empirical_quantile(ys, q);
        }
        out.fit = fit_tail_index(pairs, side, out.threshold, config.search.fit_options);
        out.ok = true;
    } catch (const Error& e) {
        out.note = std::string(to_string(side)) + ": " + e.what();
    }
    return out;
}

}  // namespace

BacktestReport expanding_backtest(const TimeSeriesDataset& dataset, int horizon,
                                  Eigen::Index min_train, const BacktestConfig& config) {
    const Eigen::Index t_total = dataset.size();
    if (horizon <= 0) throw UsageError("horizon must be positive");
    if (min_train < horizon + 2) throw UsageError("min_train is too short to fit anything");
    if (t_total < min_train + horizon + 1) {
        throw DataError("dataset too short for the backtest: need at least min_train + h + 1 = " +
                        std::to_string(min_train + horizon + 1) + " observations, have " +
                        std::to_string(t_total));
    }

    const Eigen::Index n_windows = t_total - horizon - min_train + 1;
    BacktestReport report;
    report.horizon = horizon;
    report.min_train = min_train;
    report.config = config;
    report.rows.resize(static_cast<std::size_t>(n_windows));

    parallel_for(static_cast<std::size_t>(n_windows), config.threads, [&](std::size_t w) {
        const Eigen::Index train_len = min_train + static_cast<Eigen::Index>(w);
        BacktestRow& row = report.rows[w];
        row.train_len = train_len;
        row.period = dataset.timestamps[static_cast<std::size_t>(train_len - 1 + horizon)];
        row.realized = dataset.y[train_len - 1 + horizon];
        row.q_low_new = row.q_high_new = row.q_low_old = row.q_high_old = kNaN;
        row.thr_lower = row.thr_upper = kNaN;

        PredictorResponsePairs pairs = align_horizon_prefix(dataset, horizon, train_len);
        Eigen::VectorXd x0 = dataset.x.row(train_len - 1).transpose();

        if (config.run_new) {
            TailPipeline lower = fit_one_tail(pairs, TailSide::Lower, config);
            TailPipeline upper = fit_one_tail(pairs, TailSide::Upper, config);
            row.thr_lower = lower.threshold;
            row.thr_upper = upper.threshold;
            if (lower.ok && upper.ok) {
                try {
                    KernelSpec kspec = bandwidth_rule(pairs, config.bandwidth_scale);
                    row.q_low_new =
                        extreme_quantile(lower.fit, pairs, x0, config.tau_low, kspec).estimate;
                    row.q_high_new =
                        extreme_quantile(upper.fit, pairs, x0, config.tau_high, kspec).estimate;
                    row.new_ok = true;
                } catch (const Error& e) {
                    row.note = e.what();
                }
            } else {
                row.note = lower.ok ? upper.note : lower.note;
            }
        }

        if (config.run_old) {
            try {
                SkewTParams theta = baseline_fit_at(pairs, x0);
                SkewTDist dist(theta);
                row.q_low_old = dist.quantile(config.tau_low);
                row.q_high_old = dist.quantile(config.tau_high);
                row.old_ok = true;
            } catch (const Error& e) {
                if (!row.note.empty()) row.note += "; ";
                row.note += std::string("old: ") + e.what();
            }
        }
    });

    return report;
}

CoverageTable coverage_table(const BacktestReport& report) {
    if (report.rows.empty()) throw UsageError("coverage table of an empty backtest report");
    CoverageTable table;
    table.intended_low = report.config.tau_low;
    table.intended_high = 1.0 - report.config.tau_high;

    auto tally = [&](const std::string& method, bool enabled, auto ok_of, auto low_of,
                     auto high_of) {
        if (!enabled) return;
        CoverageRow row;
        row.method = method;
        for (const auto& r : report.rows) {
            if (!ok_of(r)) continue;
            ++row.n_pred;
            if (r.realized < low_of(r)) ++row.n_below;
            if (r.realized > high_of(r)) ++row.n_above;
        }
        if (row.n_pred > 0) {
            row.freq_below = static_cast<double>(row.n_below) / static_cast<double>(row.n_pred);
            row.freq_above = static_cast<double>(row.n_above) / static_cast<double>(row.n_pred);
        }
        table.rows.push_back(row);
    };
    tally("new", report.config.run_new, [](const BacktestRow& r) { return r.new_ok; },
          [](const BacktestRow& r) { return r.q_low_new; },
          [](const BacktestRow& r) { return r.q_high_new; });
    tally("old", report.config.run_old, [](const BacktestRow& r) { return r.old_ok; },
          [](const BacktestRow& r) { return r.q_low_old; },
          [](const BacktestRow& r) { return r.q_high_old; });
    return table;
}

ScenarioDensity scenario_density(const TimeSeriesDataset& dataset, int horizon,
                                 const Eigen::VectorXd& x_scenario, TailSide tail,
                                 const std::vector<double>& grid, const BacktestConfig& config) {
    if (grid.empty()) throw UsageError("scenario density needs a response grid");
    PredictorResponsePairs pairs = align_horizon(dataset, horizon);

    ScenarioDensity out;
    out.grid = grid;
    out.tail = tail;
    out.marker_level = tail == TailSide::Lower ? 0.05 : 0.95;

    // Tail-regression side.
    TailPipeline pipe = fit_one_tail(pairs, tail, config);
    if (!pipe.ok) throw NumericError("tail fit failed for the scenario: " + pipe.note);
    KernelSpec kspec = bandwidth_rule(pairs, config.bandwidth_scale);
    double v = tail_exponent_at(pipe.fit, x_scenario);
    double f_thr = conditional_cdf(pairs, pipe.fit.threshold, x_scenario, kspec);
    out.threshold_new = pipe.fit.threshold;
    out.cdf_at_threshold = f_thr;
    double med = pipe.fit.median;
    double scale = std::fabs(pipe.fit.threshold - med);
    double tail_mass = tail == TailSide::Upper ? 1.0 - f_thr : f_thr;
    for (double y : grid) {
        bool in_tail = tail == TailSide::Upper ? y >= pipe.fit.threshold
                                               : y <= pipe.fit.threshold;
        if (!in_tail) {
            out.density_new.push_back(0.0);
            continue;
        }
        double dist = std::fabs(y - med);
        out.density_new.push_back(tail_mass * v * std::pow(dist, -v - 1.0) *
                                  std::pow(scale, v));
    }
    out.marker_new =
        extreme_quantile(pipe.fit, pairs, x_scenario, out.marker_level, kspec).estimate;

    // Baseline side.
    SkewTParams theta = baseline_fit_at(pairs, x_scenario);
    SkewTDist dist(theta);
    for (double y : grid) out.density_old.push_back(dist.pdf(y));
    out.marker_old = dist.quantile(out.marker_level);
    return out;
}

std::string backtest_report_to_csv(const BacktestReport& report) {
    std::ostringstream out;
    out << "# horizon=" << report.horizon << " min_train=" << report.min_train
        << " tau_low=" << report.config.tau_low << " tau_high=" << report.config.tau_high
        << " select_thresholds=" << (report.config.select_thresholds ? 1 : 0)
        << " bandwidth_scale=" << report.config.bandwidth_scale << "\n";
    out << "period,train_len,realized,q_low_new,q_high_new,q_low_old,q_high_old,"
           "thr_lower,thr_upper,new_ok,old_ok,note\n";
    for (const auto& r : report.rows) {
        out << r.period << ',' << r.train_len << ',' << fmt(r.realized) << ','
            << fmt(r.q_low_new) << ',' << fmt(r.q_high_new) << ',' << fmt(r.q_low_old) << ','
            << fmt(r.q_high_old) << ',' << fmt(r.thr_lower) << ',' << fmt(r.thr_upper) << ','
            << (r.new_ok ? 1 : 0) << ',' << (r.old_ok ? 1 : 0) << ',' << r.note << '\n';
    }
    return out.str();
}

std::string coverage_table_to_csv(const CoverageTable& table) {
    std::ostringstream out;
    out << "method,n_pred,n_below,n_above,freq_below,freq_above,intended_low,intended_high\n";
    for (const auto& r : table.rows) {
        out << r.method << ',' << r.n_pred << ',' << r.n_below << ',' << r.n_above << ','
            << fmt(r.freq_below) << ',' << fmt(r.freq_above) << ',' << fmt(table.intended_low)
            << ',' << fmt(table.intended_high) << '\n';
    }
    return out.str();
}

std::string scenario_density_to_csv(const ScenarioDensity& density) {
    std::ostringstream out;
    out << "# tail=" << to_string(density.tail) << " marker_level=" << density.marker_level
        << " marker_old=" << fmt(density.marker_old) << " marker_new=" << fmt(density.marker_new)
        << " threshold_new=" << fmt(density.threshold_new) << "\n";
    out << "y,density_old,density_new\n";
    for (std::size_t i = 0; i < density.grid.size(); ++i) {
        out << fmt(density.grid[i]) << ',' << fmt(density.density_old[i]) << ','
            << fmt(density.density_new[i]) << '\n';
    }
    return out.str();
}

}  // namespace gar
