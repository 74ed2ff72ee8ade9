#include <doctest.h>

#include <cmath>

#include "gar/errors.hpp"
#include "gar/math.hpp"
#include "gar/tail_index.hpp"
#include "test_util.hpp"

using namespace gar;
using test::make_pairs;

namespace {

// Three upper exceedances with log-ratios exactly {0.5, 1.0, 1.5} around
// median 0 and threshold 1.
PredictorResponsePairs three_exceedances() {
    return make_pairs({std::exp(0.5), std::exp(1.0), std::exp(1.5)});
}

}  // namespace

TEST_CASE("tail objective hand arithmetic") {
    PredictorResponsePairs pairs = three_exceedances();
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(1);

    // beta = 0: summand is L_t, so the objective is mean(L) = 1.0
    CHECK(tail_objective(beta, pairs, TailSide::Upper, 1.0, 0.0) == doctest::Approx(1.0));

    // beta0 = log 2: (1/3)(2*3.0 - 3*log 2)
    beta[0] = std::log(2.0);
    CHECK(tail_objective(beta, pairs, TailSide::Upper, 1.0, 0.0) ==
          doctest::Approx((2.0 * 3.0 - 3.0 * std::log(2.0)) / 3.0));

    // no exceedances: empty sum
    beta[0] = 0.0;
    CHECK(tail_objective(beta, pairs, TailSide::Upper, 10.0, 0.0) == 0.0);
}

TEST_CASE("tail objective rejects inconsistent threshold and median") {
    PredictorResponsePairs pairs = make_pairs({0.5, 2.0, 3.0});
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(1);
    // threshold on the wrong side of the median makes every log ratio
    // undefined; rejected before any exceedance is touched
    CHECK_THROWS_AS(tail_objective(beta, pairs, TailSide::Upper, 1.0, 2.0), UsageError);
    CHECK_THROWS_AS(tail_objective(beta, pairs, TailSide::Lower, 1.0, 0.0), UsageError);
    CHECK_THROWS_AS(tail_objective(beta, pairs, TailSide::Upper, 1.0, 1.0), UsageError);
}

TEST_CASE("intercept-only fit reproduces the Hill closed form") {
    // median 0 (middle of 7), exceedance log-ratios {0.5, 1.0, 1.5}
    PredictorResponsePairs pairs =
        make_pairs({-3.0, -2.0, -1.0, 0.0, std::exp(0.5), std::exp(1.0), std::exp(1.5)});
    TailFit fit = fit_tail_index(pairs, TailSide::Upper, 1.0);
    CHECK(fit.converged);
    CHECK(fit.n_exceed == 3);
    CHECK(fit.median == 0.0);
    // Hill: exp(beta0) = n / sum(L) = 3/3
    CHECK(std::exp(fit.beta[0]) == doctest::Approx(1.0).epsilon(1e-8));

    SUBCASE("matches Hill on random exceedance sets") {
        math::Rng rng(7);
        for (int rep = 0; rep < 5; ++rep) {
            std::vector<double> y;
            for (int i = 0; i < 6; ++i) y.push_back(-1.0 - rng.uniform());
            y.push_back(0.0);
            double sum_l = 0.0;
            int n_exc = 6;
            for (int i = 0; i < n_exc; ++i) {
                double l = 2.0 * rng.uniform();
                sum_l += l;
                y.push_back(2.0 * std::exp(l));  // threshold 2, median 0
            }
            TailFit f = fit_tail_index(make_pairs(y), TailSide::Upper, 2.0);
            CHECK(std::exp(f.beta[0]) ==
                  doctest::Approx(n_exc / sum_l).epsilon(1e-8));
        }
    }
}

TEST_CASE("analytic gradient matches central differences") {
    PredictorResponsePairs pairs = test::sample_conditional_pareto(400, 0.4, 0.3, 11);
    math::Rng rng(3);
    for (TailSide side : {TailSide::Upper, TailSide::Lower}) {
        double threshold = side == TailSide::Upper ? 1.2 : -0.5;
        double med = 0.0;
        for (int rep = 0; rep < 20; ++rep) {
            Eigen::VectorXd beta(2);
            beta << rng.uniform() - 0.5, rng.uniform() - 0.5;
            Eigen::VectorXd grad =
                tail_objective_gradient(beta, pairs, side, threshold, med);
            for (Eigen::Index j = 0; j < 2; ++j) {
                double h = 5e-6 * std::max(1.0, std::fabs(beta[j]));
                Eigen::VectorXd up = beta, dn = beta;
                up[j] += h;
                dn[j] -= h;
                double fd = (tail_objective(up, pairs, side, threshold, med) -
                             tail_objective(dn, pairs, side, threshold, med)) /
                            (2.0 * h);
                CHECK(grad[j] == doctest::Approx(fd).epsilon(1e-5));
            }
        }
    }
}

TEST_CASE("consistency on an exact conditional Pareto design") {
    // v(x) = exp(0.5 + 0.3 x); single replication here, the full Monte
    // Carlo lives in the acceptance suite
    PredictorResponsePairs pairs = test::sample_conditional_pareto(5000, 0.5, 0.3, 99);
    std::vector<double> ys(pairs.y.data(), pairs.y.data() + pairs.y.size());
    double threshold = math::empirical_quantile(ys, 0.80);
    TailFit fit = fit_tail_index(pairs, TailSide::Upper, threshold);
    CHECK(fit.converged);
    CHECK(std::fabs(fit.beta[0] - 0.5) < 0.12);
    CHECK(std::fabs(fit.beta[1] - 0.3) < 0.12);
}

TEST_CASE("lower-tail fit equals upper-tail fit on reflected data") {
    PredictorResponsePairs pairs = test::sample_conditional_pareto(800, 0.3, 0.2, 17);
    std::vector<double> ys(pairs.y.data(), pairs.y.data() + pairs.y.size());
    double med = math::median(ys);

    PredictorResponsePairs reflected = pairs;
    reflected.y = (2.0 * med - pairs.y.array()).matrix();

    double thr_up = math::empirical_quantile(ys, 0.85);
    TailFit up = fit_tail_index(pairs, TailSide::Upper, thr_up);
    TailFit lo = fit_tail_index(reflected, TailSide::Lower, 2.0 * med - thr_up);
    REQUIRE(up.converged);
    REQUIRE(lo.converged);
    CHECK(up.n_exceed == lo.n_exceed);
    for (Eigen::Index j = 0; j < up.beta.size(); ++j) {
        CHECK(up.beta[j] == doctest::Approx(lo.beta[j]).epsilon(1e-9));
    }
}

TEST_CASE("fitted point beats random perturbations (convexity spot check)") {
    PredictorResponsePairs pairs = test::sample_conditional_pareto(600, 0.4, 0.25, 5);
    TailFit fit = fit_tail_index(pairs, TailSide::Upper, 1.5);
    double at_min = tail_objective(fit.beta, pairs, TailSide::Upper, 1.5, fit.median);
    math::Rng rng(21);
    for (int k = 0; k < 100; ++k) {
        Eigen::VectorXd delta(2);
        delta << rng.uniform() - 0.5, rng.uniform() - 0.5;
        delta *= 0.1 / delta.norm();
        double perturbed =
            tail_objective(fit.beta + delta, pairs, TailSide::Upper, 1.5, fit.median);
        CHECK(perturbed >= at_min - 1e-12);
    }
}

TEST_CASE("tail exponent evaluation") {
    TailFit fit;
    fit.beta.resize(3);
    fit.beta << 2.848, -0.162, 0.303;
    Eigen::VectorXd x0(2);
    x0 << 2.732, 0.007;
    CHECK(tail_exponent_at(fit, x0) == doctest::Approx(11.107).epsilon(1e-3));
    CHECK(std::log(tail_exponent_at(fit, x0)) == doctest::Approx(2.407537).epsilon(1e-6));

    fit.beta.setZero();
    CHECK(tail_exponent_at(fit, x0) == 1.0);

    Eigen::VectorXd wrong(3);
    wrong << 1.0, 2.0, 3.0;
    CHECK_THROWS_AS(tail_exponent_at(fit, wrong), UsageError);
}

TEST_CASE("too few exceedances") {
    // 2 exceedances, 3 coefficients
    PredictorResponsePairs pairs;
    pairs.x.resize(6, 3);
    pairs.x.col(0).setOnes();
    pairs.x.col(1) << 0.1, 0.4, -0.2, 0.9, 0.5, -0.7;
    pairs.x.col(2) << 1.0, 0.2, 0.7, -0.3, 0.4, 0.6;
    pairs.y.resize(6);
    pairs.y << -1.0, -0.5, 0.0, 0.2, 3.0, 4.0;
    CHECK_THROWS_WITH_AS(fit_tail_index(pairs, TailSide::Upper, 2.5),
                         doctest::Contains("too few exceedances"), NumericError);
}
