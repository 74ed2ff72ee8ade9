#include "gar/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gar/errors.hpp"
#include "gar/math.hpp"

namespace gar {

std::vector<double> pit_values(const TailFit& fit, const PredictorResponsePairs& pairs) {
    if (!fit.converged) throw UsageError("pit_values requires a converged fit");
    std::vector<double> u;
    double denom = fit.threshold - fit.median;
    for (Eigen::Index t = 0; t < pairs.n_pairs(); ++t) {
        double y = pairs.y[t];
        bool exceed = fit.side == TailSide::Upper ? y >= fit.threshold : y <= fit.threshold;
        if (!exceed) continue;
        double l = std::log((y - fit.median) / denom);
        double v = std::exp(pairs.x.row(t).dot(fit.beta));
        u.push_back(std::exp(-v * l));
    }
    if (u.empty()) throw NumericError("no exceedances; PIT sample is empty");
    return u;
}

double discrepancy(const std::vector<double>& u) {
    if (u.empty()) throw UsageError("discrepancy of an empty PIT sample");
    const std::size_t n = u.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return u[a] < u[b];
    });

    // Average ranks on ties, scaled to rank/T0.
    std::vector<double> ecdf(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && u[order[j + 1]] == u[order[i]]) ++j;
        double avg_rank = 0.5 * static_cast<double>(i + 1 + j + 1);
        for (std::size_t k = i; k <= j; ++k) {
            ecdf[order[k]] = avg_rank / static_cast<double>(n);
        }
        i = j + 1;
    }

    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double d = u[k] - ecdf[k];
        sum += d * d;
    }
    return sum / static_cast<double>(n);
}

ThresholdSearchResult select_threshold(const PredictorResponsePairs& pairs, TailSide side,
                                       const ThresholdSearchOptions& options) {
    std::vector<double> levels = options.grid_quantiles;
    if (levels.empty()) {
        for (int k = 0; k <= 9; ++k) {
            double q = 0.75 + 0.025 * k;
            levels.push_back(side == TailSide::Upper ? q : 1.0 - q);
        }
    }
    Eigen::Index min_exceed = options.min_exceed;
    if (min_exceed <= 0) {
        min_exceed = std::max<Eigen::Index>(30, 5 * pairs.n_coef());
    }

    std::vector<double> ys(pairs.y.data(), pairs.y.data() + pairs.y.size());
    double med = math::median(ys);

    ThresholdSearchResult result;
    result.levels = levels;
    double best_d = std::numeric_limits<double>::infinity();
    Eigen::Index best_size = -1;
    bool found = false;

    for (std::size_t c = 0; c < levels.size(); ++c) {
        double threshold = math::empirical_quantile(ys, levels[c]);
        result.grid.push_back(threshold);

        Eigen::Index n_exceed = 0;
        bool side_ok = side == TailSide::Upper ? threshold > med : threshold < med;
        if (side_ok) {
            for (Eigen::Index t = 0; t < pairs.n_pairs(); ++t) {
                bool exceed = side == TailSide::Upper ? pairs.y[t] >= threshold
                                                      : pairs.y[t] <= threshold;
                if (exceed) ++n_exceed;
            }
        }
        result.tail_sizes.push_back(n_exceed);

        if (!side_ok || n_exceed < min_exceed) {
            result.admissible.push_back(false);
            result.discrepancies.push_back(std::numeric_limits<double>::quiet_NaN());
            continue;
        }

        double d;
        try {
            TailFit fit = fit_tail_index(pairs, side, threshold, options.fit_options);
            d = discrepancy(pit_values(fit, pairs));
        } catch (const NumericError&) {
            result.admissible.push_back(false);
            result.discrepancies.push_back(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        result.admissible.push_back(true);
        result.discrepancies.push_back(d);

        if (!found || d < best_d || (d == best_d && n_exceed > best_size)) {
            found = true;
            best_d = d;
            best_size = n_exceed;
            result.chosen = threshold;
            result.chosen_index = c;
        }
    }

    if (!found) {
        throw NumericError("no admissible threshold candidate: every grid point leaves "
                           "fewer than " + std::to_string(min_exceed) + " exceedances or "
                           "fails to fit");
    }
    return result;
}

}  // namespace gar
