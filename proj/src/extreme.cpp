#include "gar/extreme.hpp"

#include <cmath>
#include <string>

#include "gar/errors.hpp"

namespace gar {

double sigma_f(double cdf_value, double density_value, double kernel_l2) {
    if (!(density_value > 0.0)) {
        throw NumericError("covariate density estimate is not positive; variance undefined");
    }
    if (!(cdf_value > 0.0 && cdf_value < 1.0)) {
        throw NumericError("conditional CDF at the threshold is degenerate (" +
                           std::to_string(cdf_value) + "); no variance estimate");
    }
    return kernel_l2 / density_value * cdf_value * (1.0 - cdf_value);
}

EstimateWithSE extreme_quantile(const TailFit& fit, const PredictorResponsePairs& pairs,
                                const Eigen::VectorXd& x0, double tau, const KernelSpec& spec) {
    if (!(tau > 0.0 && tau < 1.0)) throw UsageError("tau must lie in (0,1)");

    EstimateWithSE out;
    out.v_at_x0 = tail_exponent_at(fit, x0);
    out.cdf_at_threshold = conditional_cdf(pairs, fit.threshold, x0, spec);
    double f = out.cdf_at_threshold;

    double ratio;
    if (fit.side == TailSide::Upper) {
        if (tau < f - 1e-9) {
            throw UsageError("upper-tail quantile level " + std::to_string(tau) +
                             " is below the threshold probability " + std::to_string(f));
        }
        ratio = (1.0 - tau) / (1.0 - f);
    } else {
        if (tau > f + 1e-9) {
            throw UsageError("lower-tail quantile level " + std::to_string(tau) +
                             " is above the threshold probability " + std::to_string(f));
        }
        ratio = tau / f;
    }
    out.estimate = (fit.threshold - fit.median) * std::pow(ratio, -1.0 / out.v_at_x0) +
                   fit.median;

    double density = covariate_density(pairs, x0, spec);
    out.sigma_f = sigma_f(f, density, spec.kernel_l2);
    out.effective_n = static_cast<double>(pairs.n_pairs()) * spec.bandwidths.prod();
    out.se = std::sqrt(out.sigma_f) * std::fabs(out.estimate) /
             (std::sqrt(out.effective_n) * out.v_at_x0);
    return out;
}

EstimateWithSE expected_tail(const TailFit& fit, const EstimateWithSE& quantile,
                             const Eigen::VectorXd& x0) {
    double v = tail_exponent_at(fit, x0);
    if (!(v > 1.0)) {
        throw NumericError("infinite tail expectation: v(x0) = " + std::to_string(v) +
                           " <= 1, the first tail moment does not exist");
    }
    EstimateWithSE out = quantile;
    out.v_at_x0 = v;
    out.estimate = (quantile.estimate - fit.median) * v / (v - 1.0) + fit.median;
    out.se = std::sqrt(quantile.sigma_f) * std::fabs(out.estimate) /
             (std::sqrt(quantile.effective_n) * std::fabs(v - 1.0));
    out.near_nonexistence = v <= 1.05;
    return out;
}

}  // namespace gar
