#pragma once

#include <vector>

#include "gar/dataset.hpp"
#include "gar/tail_index.hpp"

namespace gar {

/// Outcome of the data-driven threshold search.
struct ThresholdSearchResult {
    double chosen = 0.0;               // y*_min or y*_max, response units
    std::size_t chosen_index = 0;      // into the vectors below
    std::vector<double> grid;          // candidate thresholds (response units)
    std::vector<double> levels;        // the quantile levels that produced them
    std::vector<double> discrepancies; // D_T per candidate (NaN if inadmissible)
    std::vector<Eigen::Index> tail_sizes;
    std::vector<bool> admissible;
};

/// Probability integral transforms of the exceedances under the fitted
/// model: U_t = exp(-exp(x_t'beta) * L_t) in (0,1], L_t the median-subtracted
/// log ratio used by the fit itself.
std::vector<double> pit_values(const TailFit& fit, const PredictorResponsePairs& pairs);

/// Discrepancy between the PIT sample and uniformity:
///   D_T = (1/T0) * sum (U_t - F_U(U_t))^2,
/// with F_U(U_t) = rank(U_t)/T0 (average ranks on ties). In [0,1] and
/// invariant to permutations of u.
double discrepancy(const std::vector<double>& u);

struct ThresholdSearchOptions {
    std::vector<double> grid_quantiles;  // empty: 0.75..0.975 step 0.025 (mirrored for Lower)
    Eigen::Index min_exceed = 0;         // 0: max(30, 5*dim(beta))
    TailFitOptions fit_options;
};

/// Refit the tail regression at each candidate threshold (empirical
/// quantiles of the response at the grid levels), compute D_T from the PIT
/// values, and return the argmin. Ties break toward the larger tail sample.
ThresholdSearchResult select_threshold(const PredictorResponsePairs& pairs, TailSide side,
                                       const ThresholdSearchOptions& options = {});

}  // namespace gar
