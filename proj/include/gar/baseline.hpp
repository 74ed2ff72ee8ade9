#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gar/dataset.hpp"
#include "gar/skew_t.hpp"

namespace gar {

/// Linear quantile regression coefficients on a fixed tau grid.
struct QuantileGridFit {
    std::vector<double> taus;
    std::vector<Eigen::VectorXd> betas;  // one per tau, intercept first
};

/// The conventional grid {0.05, 0.25, 0.50, 0.75, 0.95}.
std::vector<double> default_tau_grid();

/// Run quantile_regression at each tau of the grid.
QuantileGridFit fit_quantile_grid(const PredictorResponsePairs& pairs,
                                  const std::vector<double>& taus = default_tau_grid());

/// Predicted quantiles x0'beta(tau) at a query covariate vector (intercept
/// prepended here).
std::vector<double> grid_quantiles_at(const QuantileGridFit& grid, const Eigen::VectorXd& x0);

/// Match a skew-t distribution to quantile values: minimize
/// sum_tau (q_tau - F^{-1}(tau; theta))^2 by simplex descent over
/// (alpha, log(nu-1.01)) with (mu, sigma) profiled out by exact least
/// squares at each trial point; 8 deterministic multi-starts spanning the
/// sign of alpha and low/high nu. Bounds: sigma in [1e-4, 1e3],
/// nu in (1.01, 300].
SkewTParams fit_skewt_to_quantile_values(const std::vector<double>& taus,
                                         const std::vector<double>& quantiles);

/// Same, with the quantiles taken from a fitted grid at x0. Requires at
/// least 4 grid points (four free parameters).
SkewTParams fit_skewt_to_quantiles(const QuantileGridFit& grid, const Eigen::VectorXd& x0);

/// Full baseline pipeline at one query point: grid regression then skew-t
/// matching.
SkewTParams baseline_fit_at(const PredictorResponsePairs& pairs, const Eigen::VectorXd& x0,
                            const std::vector<double>& taus = default_tau_grid());

}  // namespace gar
