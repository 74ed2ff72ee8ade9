#include "gar/kernel.hpp"

#include <cmath>
#include <string>

#include "gar/errors.hpp"
#include "gar/math.hpp"

namespace gar {

namespace {

double kernel_value(KernelType type, double u) {
    switch (type) {
        case KernelType::Gaussian:
            return std::exp(-0.5 * u * u) / std::sqrt(2.0 * math::pi);
        case KernelType::Epanechnikov:
            return std::fabs(u) < 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
    }
    return 0.0;
}

double kernel_l2_1d(KernelType type) {
    switch (type) {
        case KernelType::Gaussian:
            return 1.0 / (2.0 * std::sqrt(math::pi));
        case KernelType::Epanechnikov:
            return 0.6;
    }
    return 0.0;
}

void check_query(const PredictorResponsePairs& pairs, const Eigen::VectorXd& x0,
                 const KernelSpec& spec) {
    if (x0.size() != pairs.covariate_dim()) {
        throw UsageError("kernel query dimension " + std::to_string(x0.size()) +
                         " does not match covariate dimension " +
                         std::to_string(pairs.covariate_dim()));
    }
    if (spec.bandwidths.size() != pairs.covariate_dim()) {
        throw UsageError("bandwidth vector does not match covariate dimension");
    }
}

// Product kernel weight of observation row t at query x0; the intercept
// column is excluded from the distance.
double weight_at(const PredictorResponsePairs& pairs, Eigen::Index t,
                 const Eigen::VectorXd& x0, const KernelSpec& spec) {
    double w = 1.0;
    for (Eigen::Index j = 0; j < x0.size(); ++j) {
        double u = (pairs.x(t, j + 1) - x0[j]) / spec.bandwidths[j];
        w *= kernel_value(spec.kernel, u);
        if (w == 0.0) return 0.0;
    }
    return w;
}

}  // namespace

KernelSpec bandwidth_rule(const PredictorResponsePairs& pairs, double scale, KernelType kernel) {
    if (!(scale > 0.0)) throw UsageError("bandwidth scale must be positive");
    Eigen::Index d = pairs.covariate_dim();
    Eigen::Index n = pairs.n_pairs();
    KernelSpec spec;
    spec.kernel = kernel;
    spec.bandwidths.resize(d);
    double rate = std::pow(static_cast<double>(n), -1.0 / (4.0 + static_cast<double>(d)));
    for (Eigen::Index j = 0; j < d; ++j) {
        Eigen::ArrayXd col = pairs.x.col(j + 1).array();
        double mean = col.mean();
        double var = (col - mean).square().sum() / static_cast<double>(n - 1);
        double sd = std::sqrt(var);
        if (!(sd > 0.0)) {
            throw NumericError("covariate column " + std::to_string(j) +
                               " is constant; no bandwidth rule applies");
        }
        spec.bandwidths[j] = scale * sd * rate;
    }
    spec.kernel_l2 = std::pow(kernel_l2_1d(kernel), static_cast<double>(d));
    return spec;
}

double conditional_cdf(const PredictorResponsePairs& pairs, double y,
                       const Eigen::VectorXd& x0, const KernelSpec& spec) {
    check_query(pairs, x0, spec);
    double wsum = 0.0;
    double hits = 0.0;
    for (Eigen::Index t = 0; t < pairs.n_pairs(); ++t) {
        double w = weight_at(pairs, t, x0, spec);
        wsum += w;
        if (pairs.y[t] <= y) hits += w;
    }
    if (!(wsum > 0.0)) {
        throw NumericError("all kernel weights vanish at the query point; it lies outside "
                           "the covariate support");
    }
    return hits / wsum;
}

double covariate_density(const PredictorResponsePairs& pairs, const Eigen::VectorXd& x0,
                         const KernelSpec& spec) {
    check_query(pairs, x0, spec);
    double sum = 0.0;
    for (Eigen::Index t = 0; t < pairs.n_pairs(); ++t) {
        sum += weight_at(pairs, t, x0, spec);
    }
    return sum / (static_cast<double>(pairs.n_pairs()) * spec.bandwidths.prod());
}

}  // namespace gar
