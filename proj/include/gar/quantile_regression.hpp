#pragma once

#include <Eigen/Dense>

#include "gar/dataset.hpp"

namespace gar {

/// Average check loss (1/n) sum rho_tau(y_i - x_i'beta).
double check_loss(const PredictorResponsePairs& pairs, const Eigen::VectorXd& beta, double tau);

/// Linear quantile regression by exchange pivoting on interpolation bases
/// (the optimum of the piecewise-linear check loss sits at a vertex
/// interpolating n_coef observations). Exact up to floating point: the
/// returned objective is the global minimum, ties resolved by the
/// deterministic pivot order. Throws on tau outside (0,1) or a
/// rank-deficient design.
Eigen::VectorXd quantile_regression(const PredictorResponsePairs& pairs, double tau);

}  // namespace gar
