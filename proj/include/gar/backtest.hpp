#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "gar/dataset.hpp"
#include "gar/threshold.hpp"

namespace gar {

struct BacktestConfig {
    double tau_low = 0.05;
    double tau_high = 0.95;
    bool run_new = true;
    bool run_old = true;
    /// Re-choose thresholds per window by the discrepancy search; when
    /// false, fixed empirical-quantile thresholds are used instead.
    bool select_thresholds = true;
    double upper_threshold_quantile = 0.90;
    double lower_threshold_quantile = 0.10;
    double bandwidth_scale = 1.0;
    int threads = 1;
    ThresholdSearchOptions search;
};

/// One out-of-sample prediction. Quantile fields are NaN when the method
/// produced no prediction for this window (see the ok flags and note).
struct BacktestRow {
    std::string period;       // timestamp of the predicted observation
    Eigen::Index train_len = 0;
    double realized = 0.0;
    double q_low_new = 0.0, q_high_new = 0.0;
    double q_low_old = 0.0, q_high_old = 0.0;
    double thr_lower = 0.0, thr_upper = 0.0;  // chosen per-window thresholds
    bool new_ok = false, old_ok = false;
    std::string note;
};

struct BacktestReport {
    std::vector<BacktestRow> rows;
    int horizon = 0;
    Eigen::Index min_train = 0;
    BacktestConfig config;
};

/// For each t from min_train to T-h, fit on observations 1..t and predict
/// the tau_low/tau_high quantiles of Y_{t+h} at x_t; rows assembled in
/// time order regardless of thread count.
BacktestReport expanding_backtest(const TimeSeriesDataset& dataset, int horizon,
                                  Eigen::Index min_train, const BacktestConfig& config = {});

struct CoverageRow {
    std::string method;
    Eigen::Index n_pred = 0;   // windows where the method produced predictions
    Eigen::Index n_below = 0;  // realized < low quantile
    Eigen::Index n_above = 0;  // realized > high quantile
    double freq_below = 0.0;
    double freq_above = 0.0;
};

struct CoverageTable {
    std::vector<CoverageRow> rows;
    double intended_low = 0.05;
    double intended_high = 0.05;
};

CoverageTable coverage_table(const BacktestReport& report);

/// Tail densities implied by each method at a scenario covariate vector,
/// evaluated on a response grid. Grid points outside the modelled tail
/// region get zero density for the tail-regression method.
struct ScenarioDensity {
    std::vector<double> grid;
    std::vector<double> density_old;
    std::vector<double> density_new;
    double marker_old = 0.0;  // tail quantile marker (5th pct for Lower)
    double marker_new = 0.0;
    double marker_level = 0.05;
    TailSide tail = TailSide::Lower;
    double threshold_new = 0.0;
    double cdf_at_threshold = 0.0;
};

ScenarioDensity scenario_density(const TimeSeriesDataset& dataset, int horizon,
                                 const Eigen::VectorXd& x_scenario, TailSide tail,
                                 const std::vector<double>& grid,
                                 const BacktestConfig& config = {});

std::string backtest_report_to_csv(const BacktestReport& report);
std::string coverage_table_to_csv(const CoverageTable& table);
std::string scenario_density_to_csv(const ScenarioDensity& density);

}  // namespace gar
