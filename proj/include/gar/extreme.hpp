#pragma once

#include <Eigen/Dense>

#include "gar/dataset.hpp"
#include "gar/kernel.hpp"
#include "gar/tail_index.hpp"

namespace gar {

/// Point estimate, standard error, and the intermediates that produced
/// them (needed to chain the quantile into the expected-tail step and to
/// reconstruct alternative variance normalizations downstream).
struct EstimateWithSE {
    double estimate = 0.0;
    double se = 0.0;
    double v_at_x0 = 0.0;          // exp(x0'beta)
    double cdf_at_threshold = 0.0; // kernel F(threshold | x0)
    double effective_n = 0.0;      // T * prod(bandwidths)
    double sigma_f = 0.0;          // kernel_l2/g(x0) * F*(1-F)
    bool near_nonexistence = false;
};

/// Plug-in asymptotic variance of the kernel CDF estimator:
///   kernel_l2 / density * cdf * (1 - cdf).
double sigma_f(double cdf_value, double density_value, double kernel_l2);

/// Extreme conditional quantile beyond the tail threshold.
/// Upper: Q = (thr - med) * ((1-tau)/(1-F))^(-1/v) + med, tau >= F;
/// Lower: Q = (thr - med) * (tau/F)^(-1/v) + med,         tau <= F.
/// SE = sqrt(sigma_f) * |Q| / (sqrt(T * prod b) * v).
EstimateWithSE extreme_quantile(const TailFit& fit, const PredictorResponsePairs& pairs,
                                const Eigen::VectorXd& x0, double tau, const KernelSpec& spec);

/// Expected longrise/shortfall from a fitted extreme quantile:
///   (Q - med) * v/(v-1) + med, requiring v > 1. SE uses |v - 1| in the
/// denominator (variances square the term, so only the magnitude matters).
/// v in (1, 1.05] sets near_nonexistence: the v/(v-1) factor is exploding.
EstimateWithSE expected_tail(const TailFit& fit, const EstimateWithSE& quantile,
                             const Eigen::VectorXd& x0);

}  // namespace gar
