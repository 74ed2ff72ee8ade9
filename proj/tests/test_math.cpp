#include <doctest.h>

#include <cmath>

#include "gar/errors.hpp"
#include "gar/math.hpp"

using namespace gar;

TEST_CASE("normal cdf and inverse round-trip") {
    for (double p : {1e-10, 1e-4, 0.025, 0.5, 0.8, 0.975, 1.0 - 1e-6}) {
        double z = math::norm_inv(p);
        CHECK(math::norm_cdf(z) == doctest::Approx(p).epsilon(1e-12));
    }
    CHECK(math::norm_inv(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
    CHECK_THROWS_AS(math::norm_inv(0.0), UsageError);
    CHECK_THROWS_AS(math::norm_inv(1.0), UsageError);
}

TEST_CASE("incomplete beta against closed forms") {
    // I_x(1,1) = x; I_x(2,1) = x^2; I_x(1,2) = 1-(1-x)^2
    for (double x : {0.1, 0.35, 0.5, 0.9}) {
        CHECK(math::incomplete_beta(1.0, 1.0, x) == doctest::Approx(x).epsilon(1e-13));
        CHECK(math::incomplete_beta(2.0, 1.0, x) == doctest::Approx(x * x).epsilon(1e-13));
        CHECK(math::incomplete_beta(1.0, 2.0, x) ==
              doctest::Approx(1.0 - (1.0 - x) * (1.0 - x)).epsilon(1e-13));
    }
    CHECK(math::incomplete_beta(3.0, 5.0, 0.0) == 0.0);
    CHECK(math::incomplete_beta(3.0, 5.0, 1.0) == 1.0);
}

TEST_CASE("student t special cases") {
    // nu = 1 is Cauchy: CDF = 1/2 + atan(t)/pi
    for (double t : {-3.0, -0.5, 0.0, 1.0, 10.0}) {
        double expected = 0.5 + std::atan(t) / math::pi;
        CHECK(math::student_t_cdf(t, 1.0) == doctest::Approx(expected).epsilon(1e-12));
    }
    // nu = 2 has the closed form 1/2 + t / (2 sqrt(2 + t^2))
    for (double t : {-2.0, 0.3, 4.0}) {
        double expected = 0.5 + t / (2.0 * std::sqrt(2.0 + t * t));
        CHECK(math::student_t_cdf(t, 2.0) == doctest::Approx(expected).epsilon(1e-12));
    }
    // large nu approaches the normal
    CHECK(math::student_t_cdf(1.96, 1e7) == doctest::Approx(math::norm_cdf(1.96)).epsilon(1e-6));
}

TEST_CASE("student t quantile inverts the cdf") {
    for (double nu : {1.0, 2.5, 6.36, 30.0, 1000.0}) {
        for (double p : {1e-6, 0.01, 0.3, 0.5, 0.77, 0.99, 1.0 - 1e-6}) {
            double t = math::student_t_quantile(p, nu);
            CHECK(math::student_t_cdf(t, nu) == doctest::Approx(p).epsilon(1e-10));
        }
    }
    // frozen oracle: t quantile at nu=1000, p=0.975
    CHECK(math::student_t_quantile(0.975, 1000.0) == doctest::Approx(1.9623).epsilon(2e-4));
}

TEST_CASE("median conventions") {
    CHECK(math::median({1.0, 2.0, 9.0}) == 2.0);
    CHECK(math::median({4.0, 1.0, 2.0, 9.0}) == 3.0);  // mean of central pair
    CHECK(math::median({5.0}) == 5.0);
    CHECK_THROWS_AS(math::median({}), UsageError);
}

TEST_CASE("empirical quantile interpolates order statistics") {
    std::vector<double> v{1.0, 2.0, 3.0, 4.0, 5.0};
    CHECK(math::empirical_quantile(v, 0.0) == 1.0);
    CHECK(math::empirical_quantile(v, 1.0) == 5.0);
    CHECK(math::empirical_quantile(v, 0.5) == 3.0);
    CHECK(math::empirical_quantile(v, 0.625) == doctest::Approx(3.5));
}

TEST_CASE("rng determinism and range") {
    math::Rng a(42), b(42), c(43);
    bool identical = true;
    bool in_range = true;
    double first_a = -1.0, first_c = -1.0;
    for (int i = 0; i < 1000; ++i) {
        double ua = a.uniform();
        double ub = b.uniform();
        double uc = c.uniform();
        if (i == 0) {
            first_a = ua;
            first_c = uc;
        }
        identical = identical && ua == ub;
        in_range = in_range && ua > 0.0 && ua < 1.0;
    }
    CHECK(identical);
    CHECK(in_range);
    CHECK(first_a != first_c);
}
