#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace gar {

/// Which tail of the response distribution an estimator targets.
enum class TailSide { Upper, Lower };

inline const char* to_string(TailSide side) {
    return side == TailSide::Upper ? "upper" : "lower";
}

/// Column names for CSV ingestion. Empty names fall back to positional
/// defaults: first column timestamps, second the response, the rest
/// covariates.
struct CsvSchema {
    std::string timestamp;
    std::string response;
    std::vector<std::string> covariates;  // empty: every remaining column
};

/// Immutable after construction; safe to share read-only across workers.
/// Timestamps are opaque ordered labels ("1893Q1"); the covariate matrix
/// carries no intercept column (that happens at alignment).
struct TimeSeriesDataset {
    std::vector<std::string> timestamps;
    Eigen::VectorXd y;
    Eigen::MatrixXd x;  // size() rows, covariate_dim() columns
    std::vector<std::string> covariate_names;
    std::string timestamp_name = "date";
    std::string response_name = "y";

    Eigen::Index size() const { return y.size(); }
    Eigen::Index covariate_dim() const { return x.cols(); }
};

/// Aligned regression sample: row i pairs (1, X_i) with Y_{i+h}. The
/// intercept column is prepended here, once, so every downstream beta has
/// covariate_dim()+1 entries.
struct PredictorResponsePairs {
    Eigen::MatrixXd x;  // n_pairs rows, 1 + covariate_dim columns
    Eigen::VectorXd y;
    int horizon = 1;

    Eigen::Index n_pairs() const { return y.size(); }
    Eigen::Index n_coef() const { return x.cols(); }
    Eigen::Index covariate_dim() const { return x.cols() - 1; }
};

/// Parse a CSV file (header row required, UTF-8, comma separated, "." as
/// decimal point). Throws DataError naming the offending row/column on any
/// missing value, non-numeric cell, or duplicate/unsorted timestamp.
TimeSeriesDataset load_dataset(const std::string& path, const CsvSchema& schema = {});

/// Same parser over an in-memory string (used by tests and round-trips).
TimeSeriesDataset parse_dataset_csv(const std::string& text, const CsvSchema& schema = {});

/// Write a dataset back to CSV. Numeric cells use shortest round-trip
/// formatting so load_dataset(write_dataset(d)) reproduces d bit-exactly.
void write_dataset(const TimeSeriesDataset& dataset, const std::string& path);
std::string dataset_to_csv(const TimeSeriesDataset& dataset);

/// Build the (X_t, Y_{t+h}) sample for horizon h; requires 1 <= h < T.
PredictorResponsePairs align_horizon(const TimeSeriesDataset& dataset, int horizon);

/// Pairs over the first `take` observations only (expanding-window support).
PredictorResponsePairs align_horizon_prefix(const TimeSeriesDataset& dataset, int horizon,
                                            Eigen::Index take);

}  // namespace gar
