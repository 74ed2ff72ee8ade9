#pragma once

#include <Eigen/Dense>

#include "gar/dataset.hpp"

namespace gar {

/// Fitted tail-index regression v(x) = exp(x'beta) for one tail.
struct TailFit {
    TailSide side = TailSide::Upper;
    Eigen::VectorXd beta;   // intercept first, dim(X)+1 entries
    double threshold = 0.0; // y_min (Upper) or y_max (Lower), response units
    double median = 0.0;    // sample median of the response
    Eigen::Index n_exceed = 0;
    bool converged = false;
    int iterations = 0;
};

struct TailFitOptions {
    double gradient_tol = 1e-8;  // sup-norm convergence criterion
    int max_iterations = 100;
};

/// Objective of the tail index regression:
///   (1/n) * sum_t 1{exceed} * [exp(x_t'beta) * L_t - x_t'beta],
/// with L_t = log((y_t - median)/(threshold - median)) >= 0. Exceedance is
/// y >= threshold (Upper) or y <= threshold (Lower), threshold included;
/// ties contribute L_t = 0.
double tail_objective(const Eigen::VectorXd& beta, const PredictorResponsePairs& pairs,
                      TailSide side, double threshold, double median);

/// Analytic gradient of tail_objective.
Eigen::VectorXd tail_objective_gradient(const Eigen::VectorXd& beta,
                                        const PredictorResponsePairs& pairs, TailSide side,
                                        double threshold, double median);

/// Minimize tail_objective by damped Newton with backtracking line search.
/// The objective is convex (curvature sum exp(x'b) L_t x x' is PSD), so the
/// returned fit is the global minimizer: gradient sup-norm < gradient_tol.
/// Initialization: beta = 0 except intercept = log(Hill estimate).
TailFit fit_tail_index(const PredictorResponsePairs& pairs, TailSide side, double threshold,
                       const TailFitOptions& options = {});

/// exp(x0'beta) at a query covariate vector (intercept prepended here).
double tail_exponent_at(const TailFit& fit, const Eigen::VectorXd& x0);

}  // namespace gar
