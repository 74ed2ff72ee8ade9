#pragma once

#include <Eigen/Dense>

#include "gar/dataset.hpp"

namespace gar {

enum class KernelType { Gaussian, Epanechnikov };

/// Product kernel with per-dimension bandwidths. kernel_l2 is the constant
/// integral of K(u)^2 for the product kernel, so it depends on the number of
/// covariate dimensions: Gaussian (2*sqrt(pi))^-dim, Epanechnikov (3/5)^dim.
struct KernelSpec {
    KernelType kernel = KernelType::Gaussian;
    Eigen::VectorXd bandwidths;  // one per non-intercept covariate dimension
    double kernel_l2 = 0.0;
};

/// Rule-of-thumb bandwidths b_j = scale * sd_j * n^(-1/(4+dim)). Throws on a
/// constant covariate column. The exponent matches the usual multivariate
/// plug-in rate and is exposed through `scale` as the tuning knob.
KernelSpec bandwidth_rule(const PredictorResponsePairs& pairs, double scale = 1.0,
                          KernelType kernel = KernelType::Gaussian);

/// Nadaraya-Watson conditional CDF estimate F(y | x0), in [0,1] and weakly
/// increasing in y. Throws when every kernel weight is numerically zero
/// (query far outside the covariate support).
double conditional_cdf(const PredictorResponsePairs& pairs, double y,
                       const Eigen::VectorXd& x0, const KernelSpec& spec);

/// Product-kernel density estimate of the covariate law at x0.
double covariate_density(const PredictorResponsePairs& pairs, const Eigen::VectorXd& x0,
                         const KernelSpec& spec);

}  // namespace gar
