#include <doctest.h>

#include <cmath>

#include "gar/errors.hpp"
#include "gar/math.hpp"
#include "gar/skew_t.hpp"

using namespace gar;

TEST_CASE("quadrature mass and symmetric reduction") {
    for (double nu : {1.05, 3.0, 11.107, 300.0}) {
        for (double alpha : {-1.0, 0.0, 2.0}) {
            SkewTDist d({0.0, 1.0, alpha, nu});
            CHECK(d.total_mass() == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
    // alpha = 0 collapses to the symmetric Student t
    SkewTDist sym({0.0, 1.0, 0.0, 7.0});
    for (double z : {-5.0, -1.0, 0.0, 0.5, 3.0}) {
        CHECK(sym.cdf(z) == doctest::Approx(math::student_t_cdf(z, 7.0)).epsilon(1e-11));
        CHECK(sym.pdf(z) == doctest::Approx(math::student_t_pdf(z, 7.0)).epsilon(1e-12));
    }
}

TEST_CASE("quantile inverts the cdf to 1e-8 in probability units") {
    for (double nu : {2.5, 8.0, 11.107, 1000.0}) {
        for (double alpha : {-1.5, 0.0, 0.7, 3.0}) {
            SkewTDist d({1.3, 0.7, alpha, nu});
            for (double tau : {0.01, 0.05, 0.5, 0.95, 0.99}) {
                double q = d.quantile(tau);
                CHECK(d.cdf(q) == doctest::Approx(tau).epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("symmetric case medians and student-t oracle") {
    // alpha = 0: the median is mu
    SkewTDist d({2.0, 3.0, 0.0, 9.0});
    CHECK(d.quantile(0.5) == doctest::Approx(2.0).epsilon(1e-10));

    // near-normal limit: t quantile at nu=1000 ~ 1.9623
    SkewTDist n({1.0, 2.0, 0.0, 1000.0});
    CHECK(n.quantile(0.975) == doctest::Approx(1.0 + 2.0 * 1.9623).epsilon(2e-4));
}

TEST_CASE("location-scale equivariance") {
    SkewTParams standard{0.0, 1.0, -0.8, 6.0};
    SkewTDist base(standard);
    SkewTDist moved({1.7, 2.5, -0.8, 6.0});
    for (double tau : {0.01, 0.2, 0.5, 0.9, 0.999}) {
        CHECK(moved.quantile(tau) ==
              doctest::Approx(1.7 + 2.5 * base.quantile(tau)).epsilon(1e-10));
    }
}

TEST_CASE("cdf is monotone for random parameter draws") {
    math::Rng rng(51);
    for (int rep = 0; rep < 5; ++rep) {
        SkewTParams p;
        p.mu = 4.0 * rng.uniform() - 2.0;
        p.sigma = 0.5 + 2.0 * rng.uniform();
        p.alpha = 6.0 * rng.uniform() - 3.0;
        p.nu = 1.5 + 30.0 * rng.uniform();
        SkewTDist d(p);
        double prev = -1.0;
        bool monotone = true;
        for (int i = 0; i <= 1000; ++i) {
            double y = p.mu + p.sigma * (-20.0 + 0.04 * i);
            double f = d.cdf(y);
            monotone = monotone && f >= prev;
            prev = f;
        }
        CHECK(monotone);
    }
}

TEST_CASE("expected tail: normal limit and symmetry") {
    // normal-limit expected shortfall at pi = 0.05: -phi(z_0.05)/0.05
    SkewTDist n({0.0, 1.0, 0.0, 1e4});
    CHECK(n.expected_tail(0.05, TailSide::Lower) == doctest::Approx(-2.0627).epsilon(5e-3));

    // symmetric distributions: SF + LR = 2 mu
    for (double nu : {5.0, 12.0}) {
        SkewTDist d({1.5, 2.0, 0.0, nu});
        double sf = d.expected_tail(0.05, TailSide::Lower);
        double lr = d.expected_tail(0.05, TailSide::Upper);
        CHECK(sf + lr == doctest::Approx(2.0 * 1.5).epsilon(1e-6));
        CHECK(sf < d.quantile(0.05));
        CHECK(lr > d.quantile(0.95));
    }

    // nonexistent first moment
    SkewTDist heavy({0.0, 1.0, 0.5, 0.9});
    CHECK_THROWS_WITH_AS(heavy.expected_tail(0.05, TailSide::Lower),
                         doctest::Contains("does not exist"), NumericError);
    SkewTDist fine({0.0, 1.0, 0.5, 2.0});
    CHECK_THROWS_AS(fine.expected_tail(0.7, TailSide::Lower), UsageError);
}

TEST_CASE("tail expectation matches a brute-force tau integral") {
    // independent oracle: SF(pi) = (1/pi) * int_0^pi Q(tau) dtau by
    // midpoint quadrature over the quantile function
    SkewTParams p{0.5, 1.3, -0.9, 7.0};
    SkewTDist d(p);
    double pi_ = 0.05;
    int steps = 20000;
    double acc = 0.0;
    for (int i = 0; i < steps; ++i) {
        double tau = pi_ * (i + 0.5) / steps;
        acc += d.quantile(tau);
    }
    acc /= steps;
    CHECK(d.expected_tail(pi_, TailSide::Lower) == doctest::Approx(acc).epsilon(1e-4));

    double acc_up = 0.0;
    for (int i = 0; i < steps; ++i) {
        double tau = 1.0 - pi_ * (i + 0.5) / steps;
        acc_up += d.quantile(tau);
    }
    acc_up /= steps;
    CHECK(d.expected_tail(pi_, TailSide::Upper) == doctest::Approx(acc_up).epsilon(1e-4));
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(SkewTDist({0.0, -1.0, 0.0, 5.0}), UsageError);
    CHECK_THROWS_AS(SkewTDist({0.0, 1.0, 0.0, -5.0}), UsageError);
    CHECK_THROWS_AS(SkewTDist({0.0, 1.0, 0.0, 5.0}).quantile(1.5), UsageError);
}
