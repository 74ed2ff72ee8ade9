#include "gar/baseline.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "gar/errors.hpp"
#include "gar/quantile_regression.hpp"

namespace gar {

namespace {

constexpr double kSigmaLo = 1e-4;
constexpr double kSigmaHi = 1e3;
constexpr double kNuFloor = 1.01;
constexpr double kNuCap = 300.0;

struct ProfiledPoint {
    double objective = std::numeric_limits<double>::infinity();
    double mu = 0.0;
    double sigma = 1.0;
};

// For fixed (alpha, nu) the objective is linear least squares in
// (mu, sigma) against the standard quantiles; solve it exactly, clamping
// sigma into its bounds.
ProfiledPoint profile_mu_sigma(const std::vector<double>& taus, const std::vector<double>& q,
                               double alpha, double nu) {
    const auto m = static_cast<double>(taus.size());
    SkewTDist standard({0.0, 1.0, alpha, nu});
    std::vector<double> s(taus.size());
    double s_mean = 0.0, q_mean = 0.0;
    for (std::size_t i = 0; i < taus.size(); ++i) {
        s[i] = standard.quantile(taus[i]);
        s_mean += s[i];
        q_mean += q[i];
    }
    s_mean /= m;
    q_mean /= m;
    double sqq = 0.0, sss = 0.0;
    for (std::size_t i = 0; i < taus.size(); ++i) {
        sqq += (s[i] - s_mean) * (q[i] - q_mean);
        sss += (s[i] - s_mean) * (s[i] - s_mean);
    }
    ProfiledPoint out;
    out.sigma = sss > 0.0 ? sqq / sss : kSigmaLo;
    out.sigma = std::clamp(out.sigma, kSigmaLo, kSigmaHi);
    out.mu = q_mean - out.sigma * s_mean;
    double obj = 0.0;
    for (std::size_t i = 0; i < taus.size(); ++i) {
        double r = q[i] - out.mu - out.sigma * s[i];
        obj += r * r;
    }
    out.objective = obj;
    return out;
}

struct SimplexResult {
    Eigen::Vector2d x;
    ProfiledPoint point;
};

// Nelder-Mead over (alpha, t) with nu = 1.01 + exp(t) capped at kNuCap.
SimplexResult nelder_mead(const std::vector<double>& taus, const std::vector<double>& q,
                          Eigen::Vector2d start) {
    auto nu_of = [](double t) { return std::min(kNuFloor + std::exp(t), kNuCap); };
    auto eval = [&](const Eigen::Vector2d& x) {
        return profile_mu_sigma(taus, q, x[0], nu_of(x[1]));
    };

    std::array<Eigen::Vector2d, 3> xs = {start, start + Eigen::Vector2d(0.5, 0.0),
                                         start + Eigen::Vector2d(0.0, 0.5)};
    std::array<ProfiledPoint, 3> fs = {eval(xs[0]), eval(xs[1]), eval(xs[2])};

    auto order = [&]() {
        for (int a = 0; a < 3; ++a) {
            for (int b = a + 1; b < 3; ++b) {
                if (fs[b].objective < fs[a].objective) {
                    std::swap(fs[a], fs[b]);
                    std::swap(xs[a], xs[b]);
                }
            }
        }
    };

    for (int iter = 0; iter < 250; ++iter) {
        order();
        if (fs[2].objective - fs[0].objective <
                1e-13 * (1.0 + std::fabs(fs[0].objective)) &&
            (xs[2] - xs[0]).norm() < 1e-9) {
            break;
        }
        Eigen::Vector2d centroid = 0.5 * (xs[0] + xs[1]);
        Eigen::Vector2d refl = centroid + (centroid - xs[2]);
        ProfiledPoint f_refl = eval(refl);
        if (f_refl.objective < fs[0].objective) {
            Eigen::Vector2d expand = centroid + 2.0 * (centroid - xs[2]);
            ProfiledPoint f_exp = eval(expand);
            if (f_exp.objective < f_refl.objective) {
                xs[2] = expand;
                fs[2] = f_exp;
            } else {
                xs[2] = refl;
                fs[2] = f_refl;
            }
        } else if (f_refl.objective < fs[1].objective) {
            xs[2] = refl;
            fs[2] = f_refl;
        } else {
            Eigen::Vector2d contract = centroid + 0.5 * (xs[2] - centroid);
            ProfiledPoint f_con = eval(contract);
            if (f_con.objective < fs[2].objective) {
                xs[2] = contract;
                fs[2] = f_con;
            } else {
                // shrink toward the best vertex
                for (int k = 1; k < 3; ++k) {
                    xs[k] = xs[0] + 0.5 * (xs[k] - xs[0]);
                    fs[k] = eval(xs[k]);
                }
            }
        }
    }
    order();
    return {xs[0], fs[0]};
}

}  // namespace

std::vector<double> default_tau_grid() { return {0.05, 0.25, 0.50, 0.75, 0.95}; }

QuantileGridFit fit_quantile_grid(const PredictorResponsePairs& pairs,
                                  const std::vector<double>& taus) {
    QuantileGridFit fit;
    fit.taus = taus;
    for (double tau : taus) {
        fit.betas.push_back(quantile_regression(pairs, tau));
    }
    return fit;
}

std::vector<double> grid_quantiles_at(const QuantileGridFit& grid, const Eigen::VectorXd& x0) {
    std::vector<double> out;
    for (const auto& beta : grid.betas) {
        if (x0.size() + 1 != beta.size()) {
            throw UsageError("query covariate dimension does not match the quantile grid fit");
        }
        out.push_back(beta[0] + beta.tail(x0.size()).dot(x0));
    }
    return out;
}

SkewTParams fit_skewt_to_quantile_values(const std::vector<double>& taus,
                                         const std::vector<double>& quantiles) {
    if (taus.size() != quantiles.size()) {
        throw UsageError("tau grid and quantile values differ in length");
    }
    if (taus.size() < 4) {
        throw UsageError("skew-t matching needs at least 4 quantiles (four free parameters)");
    }
    for (std::size_t i = 0; i + 1 < taus.size(); ++i) {
        if (!(taus[i] < taus[i + 1])) throw UsageError("tau grid must be strictly increasing");
    }

    // Deterministic multi-starts spanning the sign of alpha and low/high nu.
    const double alphas[] = {-2.0, 2.0};
    const double nus[] = {2.5, 8.0, 30.0, 150.0};
    SimplexResult best;
    best.point.objective = std::numeric_limits<double>::infinity();
    bool any = false;
    for (double a : alphas) {
        for (double nu : nus) {
            Eigen::Vector2d start(a, std::log(nu - kNuFloor));
            SimplexResult r = nelder_mead(taus, quantiles, start);
            if (std::isfinite(r.point.objective) && r.point.objective < best.point.objective) {
                best = r;
                any = true;
            }
        }
    }
    if (!any) throw NumericError("skew-t quantile matching failed from every start");

    SkewTParams params;
    params.alpha = best.x[0];
    params.nu = std::min(kNuFloor + std::exp(best.x[1]), kNuCap);
    params.mu = best.point.mu;
    params.sigma = best.point.sigma;
    return params;
}

SkewTParams fit_skewt_to_quantiles(const QuantileGridFit& grid, const Eigen::VectorXd& x0) {
    return fit_skewt_to_quantile_values(grid.taus, grid_quantiles_at(grid, x0));
}

SkewTParams baseline_fit_at(const PredictorResponsePairs& pairs, const Eigen::VectorXd& x0,
                            const std::vector<double>& taus) {
    return fit_skewt_to_quantiles(fit_quantile_grid(pairs, taus), x0);
}

}  // namespace gar
