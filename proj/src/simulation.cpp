#include "gar/simulation.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "gar/errors.hpp"
#include "gar/extreme.hpp"
#include "gar/baseline.hpp"
#include "gar/math.hpp"
#include "gar/parallel.hpp"

namespace gar {

DgpSpec DgpSpec::quarter_ahead() {
    DgpSpec s;
    s.m_x << 2.732, 0.007;
    s.s_x << 10.671, -1.152, -1.152, 0.972;
    s.d_x << 6.360, 7.064;
    s.mu = {2.053, -0.341, -1.678};
    s.log_sigma = {0.925, 0.085, 0.437};
    s.alpha = {-0.710, 0.763, -1.218};
    s.log_nu = {2.848, -0.162, 0.303};
    s.label = "quarter";
    s.horizon = 1;
    return s;
}

DgpSpec DgpSpec::year_ahead() {
    DgpSpec s;
    s.m_x << 2.761, 0.018;
    s.s_x << 10.806, -1.193, -1.193, 0.981;
    s.d_x << 14.216, 7.685;
    s.mu = {2.301, -0.107, -0.289};
    s.log_sigma = {0.642, 0.0589, 0.224};
    s.alpha = {1.019, 0.087, -0.668};
    s.log_nu = {1.214, 0.115, 0.340};
    s.label = "year";
    s.horizon = 4;
    return s;
}

SkewTParams DgpSpec::theta_at(double x1, double x2) const {
    SkewTParams theta;
    theta.mu = mu(x1, x2);
    theta.sigma = std::exp(log_sigma(x1, x2));
    theta.alpha = alpha(x1, x2);
    theta.nu = std::exp(log_nu(x1, x2));
    return theta;
}

void DgpSpec::validate() const {
    if (!(d_x[0] > 2.0 && d_x[1] > 2.0)) {
        throw UsageError("covariate degrees of freedom must be greater than 2 so the "
                         "variance rescaling exists");
    }
    if (!(s_x(0, 0) > 0.0 && s_x(1, 1) > 0.0) || s_x(0, 1) != s_x(1, 0)) {
        throw UsageError("covariate covariance must be symmetric positive definite");
    }
    double det = s_x(0, 0) * s_x(1, 1) - s_x(0, 1) * s_x(1, 0);
    if (!(det > 0.0)) {
        throw UsageError("covariate covariance must be symmetric positive definite");
    }
}

Eigen::MatrixXd sample_covariates(const DgpSpec& spec, Eigen::Index n, std::uint64_t seed) {
    if (n < 1) throw UsageError("sample size must be at least 1");
    spec.validate();

    double rho = spec.s_x(0, 1) / std::sqrt(spec.s_x(0, 0) * spec.s_x(1, 1));
    double rho_c = std::sqrt(1.0 - rho * rho);
    Eigen::Vector2d scale;
    for (int j = 0; j < 2; ++j) {
        double t_var = spec.d_x[j] / (spec.d_x[j] - 2.0);
        scale[j] = std::sqrt(spec.s_x(j, j) / t_var);
    }

    math::Rng rng(seed);
    Eigen::MatrixXd x(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
        double z1 = rng.normal();
        double z2 = rho * z1 + rho_c * rng.normal();
        double u1 = math::norm_cdf(z1);
        double u2 = math::norm_cdf(z2);
        x(i, 0) = spec.m_x[0] + scale[0] * math::student_t_quantile(u1, spec.d_x[0]);
        x(i, 1) = spec.m_x[1] + scale[1] * math::student_t_quantile(u2, spec.d_x[1]);
    }
    return x;
}

PredictorResponsePairs sample_dataset(const DgpSpec& spec, Eigen::Index n, std::uint64_t seed) {
    Eigen::MatrixXd x = sample_covariates(spec, n, seed);
    // Separate stream for the responses so covariates match
    // sample_covariates(seed) exactly.
    math::Rng rng(seed ^ 0x9e3779b97f4a7c15ull);
    PredictorResponsePairs pairs;
    pairs.horizon = spec.horizon;
    pairs.x.resize(n, 3);
    pairs.x.col(0).setOnes();
    pairs.x.rightCols(2) = x;
    pairs.y.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        SkewTDist dist(spec.theta_at(x(i, 0), x(i, 1)));
        pairs.y[i] = dist.quantile(rng.uniform());
    }
    return pairs;
}

std::string McTarget::name() const {
    char buf[40];
    switch (kind) {
        case Kind::Quantile:
            std::snprintf(buf, sizeof(buf), "q%.6g", level);
            break;
        case Kind::Shortfall:
            std::snprintf(buf, sizeof(buf), "sf%.6g", level);
            break;
        case Kind::Longrise:
            std::snprintf(buf, sizeof(buf), "lr%.6g", level);
            break;
    }
    return buf;
}

namespace {

double true_value(const SkewTParams& theta, const McTarget& target) {
    SkewTDist dist(theta);
    switch (target.kind) {
        case McTarget::Kind::Quantile:
            return dist.quantile(target.level);
        case McTarget::Kind::Shortfall:
            return dist.expected_tail(target.level, TailSide::Lower);
        case McTarget::Kind::Longrise:
            return dist.expected_tail(target.level, TailSide::Upper);
    }
    throw UsageError("unknown Monte Carlo target");
}

TailSide target_side(const McTarget& target) {
    if (target.kind == McTarget::Kind::Shortfall) return TailSide::Lower;
    if (target.kind == McTarget::Kind::Longrise) return TailSide::Upper;
    return target.level >= 0.5 ? TailSide::Upper : TailSide::Lower;
}

struct RepResult {
    // one entry per (target), NaN = failure
    std::vector<double> new_estimates;
    std::vector<double> old_estimates;
};

}  // namespace

McSummary run_monte_carlo(const DgpSpec& spec, const McConfig& config) {
    if (config.reps < 2) throw UsageError("Monte Carlo needs at least 2 replications");
    if (config.targets.empty()) throw UsageError("no Monte Carlo targets");
    if (config.sample_sizes.empty()) throw UsageError("no sample sizes");
    spec.validate();

    const Eigen::Vector2d x0 = spec.m_x;
    const std::size_t n_targets = config.targets.size();

    std::vector<double> truths(n_targets);
    SkewTParams theta0 = spec.theta_at(x0[0], x0[1]);
    for (std::size_t k = 0; k < n_targets; ++k) {
        truths[k] = true_value(theta0, config.targets[k]);
    }

    McSummary summary;
    summary.x0 = x0;

    for (Eigen::Index t_size : config.sample_sizes) {
        std::vector<RepResult> results(static_cast<std::size_t>(config.reps));

        parallel_for(static_cast<std::size_t>(config.reps), config.threads, [&](std::size_t rep) {
            std::uint64_t rep_seed = config.seed + static_cast<std::uint64_t>(rep);
            PredictorResponsePairs pairs = sample_dataset(spec, t_size, rep_seed);
            RepResult& out = results[rep];
            out.new_estimates.assign(n_targets, std::numeric_limits<double>::quiet_NaN());
            out.old_estimates.assign(n_targets, std::numeric_limits<double>::quiet_NaN());

            if (config.run_new) {
                // Fixed rule-of-thumb thresholds; one fit per tail, reused
                // across targets.
                std::vector<double> ys(pairs.y.data(), pairs.y.data() + pairs.y.size());
                KernelSpec kspec;
                TailFit upper, lower;
                bool upper_ok = false, lower_ok = false;
                try {
                    kspec = bandwidth_rule(pairs, config.bandwidth_scale);
                } catch (const Error&) {
                }
                if (kspec.bandwidths.size() > 0) {
                    try {
                        upper = fit_tail_index(
                            pairs, TailSide::Upper,
                            math::empirical_quantile(ys, config.upper_threshold_quantile));
                        upper_ok = true;
                    } catch (const Error&) {
                    }
                    try {
                        lower = fit_tail_index(
                            pairs, TailSide::Lower,
                            math::empirical_quantile(ys, config.lower_threshold_quantile));
                        lower_ok = true;
                    } catch (const Error&) {
                    }
                }
                for (std::size_t k = 0; k < n_targets; ++k) {
                    const McTarget& target = config.targets[k];
                    TailSide side = target_side(target);
                    const TailFit& fit = side == TailSide::Upper ? upper : lower;
                    if (!(side == TailSide::Upper ? upper_ok : lower_ok)) continue;
                    try {
                        if (target.kind == McTarget::Kind::Quantile) {
                            out.new_estimates[k] =
                                extreme_quantile(fit, pairs, x0, target.level, kspec).estimate;
                        } else {
                            double tau = side == TailSide::Upper ? 1.0 - target.level
                                                                 : target.level;
                            EstimateWithSE q = extreme_quantile(fit, pairs, x0, tau, kspec);
                            out.new_estimates[k] = expected_tail(fit, q, x0).estimate;
                        }
                    } catch (const Error&) {
                    }
                }
            }

            if (config.run_old) {
                try {
                    SkewTParams theta = baseline_fit_at(pairs, x0);
                    SkewTDist dist(theta);
                    for (std::size_t k = 0; k < n_targets; ++k) {
                        const McTarget& target = config.targets[k];
                        try {
                            switch (target.kind) {
                                case McTarget::Kind::Quantile:
                                    out.old_estimates[k] = dist.quantile(target.level);
                                    break;
                                case McTarget::Kind::Shortfall:
                                    out.old_estimates[k] =
                                        dist.expected_tail(target.level, TailSide::Lower);
                                    break;
                                case McTarget::Kind::Longrise:
                                    out.old_estimates[k] =
                                        dist.expected_tail(target.level, TailSide::Upper);
                                    break;
                            }
                        } catch (const Error&) {
                        }
                    }
                } catch (const Error&) {
                }
            }
        });

        // Reduce in replication order.
        auto add_rows = [&](const std::string& method, bool enabled,
                            auto estimates_of) {
            if (!enabled) return;
            for (std::size_t k = 0; k < n_targets; ++k) {
                McRow row;
                row.method = method;
                row.target = config.targets[k].name();
                row.sample_size = t_size;
                row.truth = truths[k];
                double sum = 0.0, sum_sq_err = 0.0;
                int n_ok = 0;
                for (int rep = 0; rep < config.reps; ++rep) {
                    double est = estimates_of(results[static_cast<std::size_t>(rep)], k);
                    if (std::isnan(est)) {
                        ++row.failures;
                        continue;
                    }
                    sum += est;
                    sum_sq_err += (est - truths[k]) * (est - truths[k]);
                    ++n_ok;
                }
                if (n_ok == 0) {
                    row.mean = row.iqr_lo = row.iqr_hi = row.rmse =
                        std::numeric_limits<double>::quiet_NaN();
                } else {
                    row.mean = sum / n_ok;
                    double var = 0.0;
                    for (int rep = 0; rep < config.reps; ++rep) {
                        double est = estimates_of(results[static_cast<std::size_t>(rep)], k);
                        if (std::isnan(est)) continue;
                        var += (est - row.mean) * (est - row.mean);
                    }
                    var /= std::max(1, n_ok - 1);
                    double half = 0.6745 * std::sqrt(var);
                    row.iqr_lo = row.mean - half;
                    row.iqr_hi = row.mean + half;
                    row.rmse = std::sqrt(sum_sq_err / n_ok);
                }
                summary.rows.push_back(row);
            }
        };
        add_rows("new", config.run_new,
                 [](const RepResult& r, std::size_t k) { return r.new_estimates[k]; });
        add_rows("old", config.run_old,
                 [](const RepResult& r, std::size_t k) { return r.old_estimates[k]; });
    }
    return summary;
}

std::string mc_summary_to_csv(const McSummary& summary) {
    std::ostringstream out;
    out << "method,target,T,mean,iqr_lo,iqr_hi,rmse,truth,failures\n";
    char buf[64];
    auto fmt = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    for (const auto& row : summary.rows) {
        out << row.method << ',' << row.target << ',' << row.sample_size << ',' << fmt(row.mean)
            << ',' << fmt(row.iqr_lo) << ',' << fmt(row.iqr_hi) << ',' << fmt(row.rmse) << ','
            << fmt(row.truth) << ',' << row.failures << '\n';
    }
    return out.str();
}

}  // namespace gar
