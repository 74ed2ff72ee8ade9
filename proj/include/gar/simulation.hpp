#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "gar/dataset.hpp"
#include "gar/skew_t.hpp"

namespace gar {

/// Affine map c0 + c1*x1 + c2*x2 of the two covariates.
struct CoeffTriple {
    double c0 = 0.0, c1 = 0.0, c2 = 0.0;
    double operator()(double x1, double x2) const { return c0 + c1 * x1 + c2 * x2; }
};

/// A simulation design: two Student-t covariates coupled by a Gaussian
/// copula, and conditional skew-t parameter maps. The copula correlation is
/// the Pearson correlation implied by the off-diagonal of s_x; each t
/// marginal is rescaled so the covariance diagonal is met exactly.
struct DgpSpec {
    Eigen::Vector2d m_x;
    Eigen::Matrix2d s_x;
    Eigen::Vector2d d_x;   // per-dimension t degrees of freedom, each > 2
    CoeffTriple mu;        // location
    CoeffTriple log_sigma; // log scale
    CoeffTriple alpha;     // skewness
    CoeffTriple log_nu;    // log tail exponent
    std::string label;
    int horizon = 1;

    static DgpSpec quarter_ahead();
    static DgpSpec year_ahead();

    SkewTParams theta_at(double x1, double x2) const;
    void validate() const;
};

/// Draw n covariate rows; deterministic given the seed.
Eigen::MatrixXd sample_covariates(const DgpSpec& spec, Eigen::Index n, std::uint64_t seed);

/// Draw a full (X, Y) sample: covariates as above, responses by
/// inverse-CDF sampling from the conditional skew-t. The returned pairs
/// carry the prepended intercept column.
PredictorResponsePairs sample_dataset(const DgpSpec& spec, Eigen::Index n, std::uint64_t seed);

/// What a Monte Carlo run estimates: an extreme quantile at level tau, or
/// an expected shortfall/longrise at tail probability pi.
struct McTarget {
    enum class Kind { Quantile, Shortfall, Longrise };
    Kind kind = Kind::Quantile;
    double level = 0.95;  // tau for quantiles, pi otherwise

    std::string name() const;
};

struct McConfig {
    std::vector<McTarget> targets;
    std::vector<Eigen::Index> sample_sizes;
    int reps = 200;
    std::uint64_t seed = 1;
    bool run_new = true;
    bool run_old = true;
    int threads = 1;
    double upper_threshold_quantile = 0.90;
    double lower_threshold_quantile = 0.10;
    double bandwidth_scale = 1.0;
};

/// One summary row per (method, target, sample size).
struct McRow {
    std::string method;  // "new" or "old"
    std::string target;
    Eigen::Index sample_size = 0;
    double mean = 0.0;
    double iqr_lo = 0.0;  // Gaussian interquartile range: mean -+ 0.6745*sd
    double iqr_hi = 0.0;
    double rmse = 0.0;
    double truth = 0.0;
    int failures = 0;
};

struct McSummary {
    std::vector<McRow> rows;
    Eigen::Vector2d x0;  // query point (the design mean)
};

/// Replications use seeds seed + rep index and reduce in replication
/// order, so the summary is bit-identical for any thread count. Estimator
/// failures are excluded from the moments and counted per row.
McSummary run_monte_carlo(const DgpSpec& spec, const McConfig& config);

/// CSV serialization (schema: method,target,T,mean,iqr_lo,iqr_hi,rmse,
/// truth,failures).
std::string mc_summary_to_csv(const McSummary& summary);

}  // namespace gar
