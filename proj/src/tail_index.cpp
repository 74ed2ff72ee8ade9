#include "gar/tail_index.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "gar/errors.hpp"
#include "gar/math.hpp"

namespace gar {

namespace {

struct TailSample {
    std::vector<Eigen::Index> rows;  // indices of exceedances
    std::vector<double> log_ratio;   // L_t per exceedance, >= 0
};

TailSample collect_exceedances(const PredictorResponsePairs& pairs, TailSide side,
                               double threshold, double median) {
    if (side == TailSide::Upper && !(threshold > median)) {
        throw UsageError("upper-tail threshold must exceed the median");
    }
    if (side == TailSide::Lower && !(threshold < median)) {
        throw UsageError("lower-tail threshold must lie below the median");
    }
    TailSample sample;
    double denom = threshold - median;
    for (Eigen::Index t = 0; t < pairs.n_pairs(); ++t) {
        double y = pairs.y[t];
        bool exceed = side == TailSide::Upper ? y >= threshold : y <= threshold;
        if (!exceed) continue;
        double ratio = (y - median) / denom;
        if (!(ratio >= 1.0)) {
            throw NumericError("exceedance at row " + std::to_string(t) +
                               " lies on the wrong side of the median; threshold and "
                               "median are inconsistent");
        }
        sample.rows.push_back(t);
        sample.log_ratio.push_back(std::log(ratio));
    }
    return sample;
}

}  // namespace

double tail_objective(const Eigen::VectorXd& beta, const PredictorResponsePairs& pairs,
                      TailSide side, double threshold, double median) {
    TailSample sample = collect_exceedances(pairs, side, threshold, median);
    double sum = 0.0;
    for (std::size_t k = 0; k < sample.rows.size(); ++k) {
        double xb = pairs.x.row(sample.rows[k]).dot(beta);
        sum += std::exp(xb) * sample.log_ratio[k] - xb;
    }
    return sum / static_cast<double>(pairs.n_pairs());
}

Eigen::VectorXd tail_objective_gradient(const Eigen::VectorXd& beta,
                                        const PredictorResponsePairs& pairs, TailSide side,
                                        double threshold, double median) {
    TailSample sample = collect_exceedances(pairs, side, threshold, median);
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(beta.size());
    for (std::size_t k = 0; k < sample.rows.size(); ++k) {
        double xb = pairs.x.row(sample.rows[k]).dot(beta);
        double w = std::exp(xb) * sample.log_ratio[k] - 1.0;
        grad += w * pairs.x.row(sample.rows[k]).transpose();
    }
    return grad / static_cast<double>(pairs.n_pairs());
}

TailFit fit_tail_index(const PredictorResponsePairs& pairs, TailSide side, double threshold,
                       const TailFitOptions& options) {
    double med = math::median(std::vector<double>(pairs.y.data(), pairs.y.data() + pairs.y.size()));
    TailSample sample = collect_exceedances(pairs, side, threshold, med);

    const Eigen::Index p = pairs.n_coef();
    const auto n_exceed = static_cast<Eigen::Index>(sample.rows.size());
    if (n_exceed < p + 2) {
        throw NumericError("too few exceedances for the tail regression: " +
                           std::to_string(n_exceed) + " available, need at least " +
                           std::to_string(p + 2));
    }

    double sum_l = 0.0;
    for (double l : sample.log_ratio) sum_l += l;
    if (!(sum_l > 0.0)) {
        throw NumericError("all exceedances sit exactly at the threshold; tail scale is "
                           "unidentified");
    }

    const double n = static_cast<double>(pairs.n_pairs());
    Eigen::MatrixXd xe(n_exceed, p);
    Eigen::VectorXd le(n_exceed);
    for (Eigen::Index k = 0; k < n_exceed; ++k) {
        xe.row(k) = pairs.x.row(sample.rows[static_cast<std::size_t>(k)]);
        le[k] = sample.log_ratio[static_cast<std::size_t>(k)];
    }

    auto objective = [&](const Eigen::VectorXd& b) {
        Eigen::VectorXd xb = xe * b;
        double s = 0.0;
        for (Eigen::Index k = 0; k < n_exceed; ++k) {
            s += std::exp(xb[k]) * le[k] - xb[k];
        }
        return s / n;
    };

    // beta = 0 except the intercept, seeded at the Hill estimate of the
    // exceedance set.
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    beta[0] = std::log(static_cast<double>(n_exceed) / sum_l);

    TailFit fit;
    fit.side = side;
    fit.threshold = threshold;
    fit.median = med;
    fit.n_exceed = n_exceed;

    double f = objective(beta);
    for (int iter = 1; iter <= options.max_iterations; ++iter) {
        Eigen::VectorXd xb = xe * beta;
        Eigen::VectorXd w = (xb.array().exp() * le.array()).matrix();  // curvature weights
        Eigen::VectorXd grad = (xe.transpose() * (w - Eigen::VectorXd::Ones(n_exceed))) / n;

        fit.iterations = iter;
        if (grad.lpNorm<Eigen::Infinity>() < options.gradient_tol) {
            fit.converged = true;
            break;
        }

        Eigen::MatrixXd hess = (xe.transpose() * w.asDiagonal() * xe) / n;
        Eigen::VectorXd dir;
        double ridge = 0.0;
        for (int attempt = 0; attempt < 6; ++attempt) {
            Eigen::LDLT<Eigen::MatrixXd> ldlt(hess + ridge * Eigen::MatrixXd::Identity(p, p));
            if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
                dir = ldlt.solve(-grad);
                if (dir.allFinite() && grad.dot(dir) < 0.0) break;
            }
            dir.resize(0);
            ridge = ridge == 0.0 ? 1e-10 * std::max(1.0, hess.trace()) : ridge * 100.0;
        }
        if (dir.size() == 0) {
            throw NumericError("singular curvature in the tail regression (collinear "
                               "covariates among exceedances?)");
        }

        // Backtracking line search (Armijo).
        double gd = grad.dot(dir);
        double step = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            Eigen::VectorXd trial = beta + step * dir;
            double ft = objective(trial);
            if (std::isfinite(ft) && ft <= f + 1e-4 * step * gd) {
                beta = trial;
                f = ft;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            // Gradient is nonzero but no descent step exists at double
            // precision; treat the current point as converged-at-precision.
            break;
        }
    }

    if (!fit.converged) {
        Eigen::VectorXd grad = tail_objective_gradient(beta, pairs, side, threshold, med);
        if (grad.lpNorm<Eigen::Infinity>() < options.gradient_tol) {
            fit.converged = true;
        } else {
            throw NumericError("tail regression did not converge after " +
                               std::to_string(options.max_iterations) + " iterations");
        }
    }
    fit.beta = beta;
    return fit;
}

double tail_exponent_at(const TailFit& fit, const Eigen::VectorXd& x0) {
    if (x0.size() + 1 != fit.beta.size()) {
        throw UsageError("query covariate dimension " + std::to_string(x0.size()) +
                         " does not match fit with " + std::to_string(fit.beta.size() - 1) +
                         " covariates");
    }
    double xb = fit.beta[0] + fit.beta.tail(x0.size()).dot(x0);
    return std::exp(xb);
}

}  // namespace gar
