#include "gar/quantile_regression.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gar/errors.hpp"

namespace gar {

double check_loss(const PredictorResponsePairs& pairs, const Eigen::VectorXd& beta, double tau) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < pairs.n_pairs(); ++i) {
        double u = pairs.y[i] - pairs.x.row(i).dot(beta);
        sum += u * (tau - (u < 0.0 ? 1.0 : 0.0));
    }
    return sum / static_cast<double>(pairs.n_pairs());
}

// Exchange pivoting on interpolation bases. The check loss is piecewise
// linear and convex, so some vertex interpolating n_coef observations is
// optimal; each pivot swaps one basis row for the breakpoint where the
// directional derivative turns nonnegative. Zero residuals off the basis
// (degenerate/exact-fit data) are handled through their true one-sided
// derivative, which always resists movement.
Eigen::VectorXd quantile_regression(const PredictorResponsePairs& pairs, double tau) {
    if (!(tau > 0.0 && tau < 1.0)) throw UsageError("tau must lie in (0,1)");
    const Eigen::Index n = pairs.n_pairs();
    const Eigen::Index p = pairs.n_coef();
    if (n <= p) throw NumericError("quantile regression needs more observations than coefficients");

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(pairs.x.transpose());
    if (qr.rank() < p) {
        throw NumericError("rank-deficient design matrix in quantile regression");
    }
    std::vector<Eigen::Index> basis(static_cast<std::size_t>(p));
    for (Eigen::Index k = 0; k < p; ++k) {
        basis[static_cast<std::size_t>(k)] = qr.colsPermutation().indices()[k];
    }

    const double y_scale = std::max(1.0, pairs.y.cwiseAbs().maxCoeff());
    const double eps_zero = 1e-9 * y_scale;

    Eigen::MatrixXd xb(p, p);
    Eigen::VectorXd yb(p);
    Eigen::VectorXd beta(p);
    Eigen::VectorXd residual(n);
    std::vector<bool> in_basis(static_cast<std::size_t>(n));

    const int max_pivots = 200 + 10 * static_cast<int>(n);
    for (int pivot = 0; pivot < max_pivots; ++pivot) {
        std::fill(in_basis.begin(), in_basis.end(), false);
        for (Eigen::Index k = 0; k < p; ++k) {
            Eigen::Index row = basis[static_cast<std::size_t>(k)];
            in_basis[static_cast<std::size_t>(row)] = true;
            xb.row(k) = pairs.x.row(row);
            yb[k] = pairs.y[row];
        }
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(xb);
        beta = lu.solve(yb);
        residual = pairs.y - pairs.x * beta;

        // Candidate leaving coordinates, most violated first, from the
        // subgradient box condition X_B' w = -c, w in [tau-1, tau].
        Eigen::VectorXd c = Eigen::VectorXd::Zero(p);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (in_basis[static_cast<std::size_t>(i)]) continue;
            double psi = tau - (residual[i] < 0.0 ? 1.0 : 0.0);
            c += psi * pairs.x.row(i).transpose();
        }
        Eigen::VectorXd w = xb.transpose().partialPivLu().solve(-c);

        struct Candidate {
            double violation;
            Eigen::Index j;
            bool to_positive;
        };
        std::vector<Candidate> candidates;
        for (Eigen::Index j = 0; j < p; ++j) {
            if (w[j] - tau > 1e-10) candidates.push_back({w[j] - tau, j, true});
            if ((tau - 1.0) - w[j] > 1e-10) candidates.push_back({(tau - 1.0) - w[j], j, false});
        }
        std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
            return a.violation > b.violation || (a.violation == b.violation && a.j < b.j);
        });

        bool moved = false;
        for (const Candidate& cand : candidates) {
            Eigen::VectorXd e = Eigen::VectorXd::Zero(p);
            e[cand.j] = cand.to_positive ? -1.0 : 1.0;
            Eigen::VectorXd d = lu.solve(e);
            Eigen::VectorXd xd = pairs.x * d;

            // True one-sided derivative along d; zero residuals contribute
            // their resisting kink slope.
            double deriv = cand.to_positive ? tau : 1.0 - tau;  // leaving row
            for (Eigen::Index i = 0; i < n; ++i) {
                if (in_basis[static_cast<std::size_t>(i)]) continue;
                if (residual[i] > eps_zero) {
                    deriv += -tau * xd[i];
                } else if (residual[i] < -eps_zero) {
                    deriv += (1.0 - tau) * xd[i];
                } else {
                    deriv += xd[i] > 0.0 ? (1.0 - tau) * xd[i] : -tau * xd[i];
                }
            }
            if (deriv >= -1e-10) continue;  // not a genuine descent (degeneracy)

            struct Breakpoint {
                double s;
                double slope_gain;
                Eigen::Index row;
            };
            std::vector<Breakpoint> bps;
            for (Eigen::Index i = 0; i < n; ++i) {
                if (in_basis[static_cast<std::size_t>(i)]) continue;
                if (std::fabs(xd[i]) < 1e-12) continue;
                double s = residual[i] / xd[i];
                if (s <= eps_zero / std::max(std::fabs(xd[i]), 1e-12)) continue;
                bps.push_back({s, std::fabs(xd[i]), i});
            }
            if (bps.empty()) {
                throw NumericError("unbounded quantile regression objective (degenerate design)");
            }
            std::sort(bps.begin(), bps.end(), [](const Breakpoint& a, const Breakpoint& b) {
                return a.s < b.s || (a.s == b.s && a.row < b.row);
            });
            Eigen::Index enter = -1;
            for (const auto& bp : bps) {
                deriv += bp.slope_gain;
                if (deriv >= -1e-12) {
                    enter = bp.row;
                    break;
                }
            }
            if (enter < 0) {
                throw NumericError("unbounded quantile regression objective");
            }
            basis[static_cast<std::size_t>(cand.j)] = enter;
            moved = true;
            break;
        }
        if (!moved) {
            return beta;  // optimal vertex (or degenerate-flat optimum)
        }
    }
    throw NumericError("quantile regression exceeded the pivot budget (cycling?)");
}

}  // namespace gar
