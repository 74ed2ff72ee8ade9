#include <doctest.h>

#include <cmath>

#include "gar/baseline.hpp"
#include "gar/errors.hpp"
#include "gar/math.hpp"
#include "test_util.hpp"

using namespace gar;
using test::make_pairs;

TEST_CASE("skew-t matching recovers an exact generator") {
    SkewTParams truth{2.0, 1.0, -0.5, 8.0};
    SkewTDist d(truth);
    std::vector<double> taus = default_tau_grid();
    std::vector<double> q;
    for (double tau : taus) q.push_back(d.quantile(tau));

    SkewTParams fit = fit_skewt_to_quantile_values(taus, q);
    SkewTDist fitted(fit);
    double objective = 0.0;
    for (std::size_t i = 0; i < taus.size(); ++i) {
        double r = q[i] - fitted.quantile(taus[i]);
        objective += r * r;
        CHECK(fitted.quantile(taus[i]) == doctest::Approx(q[i]).epsilon(1e-3));
    }
    CHECK(objective < 1e-8);
}

TEST_CASE("symmetric quantiles produce nearly zero skewness") {
    SkewTDist d({0.7, 1.4, 0.0, 6.0});
    std::vector<double> taus = default_tau_grid();
    std::vector<double> q;
    for (double tau : taus) q.push_back(d.quantile(tau));
    SkewTParams fit = fit_skewt_to_quantile_values(taus, q);
    CHECK(std::fabs(fit.alpha) < 0.05);
}

TEST_CASE("matching requires at least four quantiles") {
    CHECK_THROWS_AS(fit_skewt_to_quantile_values({0.25, 0.5, 0.75}, {-1.0, 0.0, 1.0}),
                    UsageError);
    CHECK_THROWS_AS(fit_skewt_to_quantile_values({0.5, 0.25, 0.75, 0.9}, {0, 0, 0, 0}),
                    UsageError);  // not increasing
}

TEST_CASE("bounds are enforced") {
    // near-Gaussian quantiles push nu to the cap, never beyond
    std::vector<double> taus = default_tau_grid();
    std::vector<double> q;
    for (double tau : taus) q.push_back(math::norm_inv(tau));
    SkewTParams fit = fit_skewt_to_quantile_values(taus, q);
    CHECK(fit.nu <= 300.0);
    CHECK(fit.nu > 1.01);
    CHECK(fit.sigma >= 1e-4);
    CHECK(fit.sigma <= 1e3);
}

TEST_CASE("grid fit evaluates quantiles at a query point") {
    // noiseless heteroskedastic-free linear model: every conditional
    // quantile is 2 + 3x + c(tau)
    math::Rng rng(37);
    std::vector<double> x, y;
    for (int i = 0; i < 200; ++i) {
        x.push_back(2.0 * rng.uniform() - 1.0);
        y.push_back(2.0 + 3.0 * x.back() + rng.normal());
    }
    PredictorResponsePairs pairs = make_pairs(y, x);
    QuantileGridFit grid = fit_quantile_grid(pairs);
    CHECK(grid.taus.size() == 5);
    CHECK(grid.betas.size() == 5);

    Eigen::VectorXd x0 = Eigen::VectorXd::Constant(1, 0.25);
    std::vector<double> q = grid_quantiles_at(grid, x0);
    REQUIRE(q.size() == 5);
    // quantiles must be increasing at an interior query point
    for (std::size_t i = 0; i + 1 < q.size(); ++i) CHECK(q[i] < q[i + 1]);
    // the median quantile is near 2 + 3*0.25
    CHECK(q[2] == doctest::Approx(2.75).epsilon(0.15));
}

TEST_CASE("baseline pipeline is consistent when the model is correct") {
    // constant alpha/nu, linear location: the baseline's assumptions hold
    // exactly, so its tau = 0.95 quantile converges to the truth
    SkewTParams noise{0.0, 1.0, 1.0, 8.0};
    SkewTDist noise_dist(noise);
    auto sample = [&](Eigen::Index n, std::uint64_t seed) {
        math::Rng rng(seed);
        std::vector<double> x, y;
        for (Eigen::Index i = 0; i < n; ++i) {
            x.push_back(2.0 * rng.uniform() - 1.0);
            y.push_back(1.0 + 0.5 * x.back() + noise_dist.quantile(rng.uniform()));
        }
        return make_pairs(y, x);
    };
    Eigen::VectorXd x0 = Eigen::VectorXd::Constant(1, 0.3);
    double truth = 1.0 + 0.5 * 0.3 + noise_dist.quantile(0.95);

    auto mean_abs_error = [&](Eigen::Index n) {
        double acc = 0.0;
        for (std::uint64_t rep = 0; rep < 3; ++rep) {
            SkewTParams theta = baseline_fit_at(sample(n, 100 + rep), x0);
            acc += std::fabs(SkewTDist(theta).quantile(0.95) - truth);
        }
        return acc / 3.0;
    };
    double small = mean_abs_error(250);
    double large = mean_abs_error(4000);
    CHECK(large < small);
    CHECK(large < 0.2);
}
