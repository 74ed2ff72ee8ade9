#include "gar/math.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gar/errors.hpp"

namespace gar::math {

double norm_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * pi);
}

double norm_cdf(double z) {
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

double norm_inv(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw UsageError("norm_inv: p must lie in (0,1)");
    }
    // Acklam's rational approximation, then one Halley step.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        double q = p - 0.5;
        double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    double e = norm_cdf(x) - p;
    double u = e * std::sqrt(2.0 * pi) * std::exp(0.5 * x * x);
    x = x - u / (1.0 + 0.5 * x * u);
    return x;
}

namespace {

// Continued fraction for the incomplete beta function (modified Lentz).
double beta_cf(double a, double b, double x) {
    constexpr int max_iter = 300;
    constexpr double eps = 3e-16;
    constexpr double fpmin = 1e-300;

    double qab = a + b;
    double qap = a + 1.0;
    double qam = a - 1.0;
    double c = 1.0;
    double dd = 1.0 - qab * x / qap;
    if (std::fabs(dd) < fpmin) dd = fpmin;
    dd = 1.0 / dd;
    double h = dd;
    for (int m = 1; m <= max_iter; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        dd = 1.0 + aa * dd;
        if (std::fabs(dd) < fpmin) dd = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        dd = 1.0 / dd;
        h *= dd * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        dd = 1.0 + aa * dd;
        if (std::fabs(dd) < fpmin) dd = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        dd = 1.0 / dd;
        double del = dd * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) return h;
    }
    throw NumericError("incomplete_beta: continued fraction did not converge");
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0 && b > 0.0)) {
        throw UsageError("incomplete_beta: a and b must be positive");
    }
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                      a * std::log(x) + b * std::log1p(-x);
    double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_cf(a, b, x) / a;
    }
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_pdf(double t, double nu) {
    if (!(nu > 0.0)) throw UsageError("student_t_pdf: nu must be positive");
    double ln = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                0.5 * std::log(nu * pi) -
                0.5 * (nu + 1.0) * std::log1p(t * t / nu);
    return std::exp(ln);
}

double student_t_cdf(double t, double nu) {
    if (!(nu > 0.0)) throw UsageError("student_t_cdf: nu must be positive");
    if (t == 0.0) return 0.5;
    double x = nu / (nu + t * t);
    double tail = 0.5 * incomplete_beta(0.5 * nu, 0.5, x);
    return t > 0.0 ? 1.0 - tail : tail;
}

double student_t_quantile(double p, double nu) {
    if (!(p > 0.0 && p < 1.0)) {
        throw UsageError("student_t_quantile: p must lie in (0,1)");
    }
    if (p == 0.5) return 0.0;
    // Symmetry: solve in the upper half.
    if (p < 0.5) return -student_t_quantile(1.0 - p, nu);

    // Initial guess from the normal quantile, inflated for fat tails; a
    // Pareto-tail seed takes over when that is far off (small nu, tiny tail).
    double z = norm_inv(p);
    double t = nu > 2.0 ? z * std::sqrt(nu / (nu - 2.0)) : std::max(z, 1.0);
    double tail = 1.0 - p;
    if (nu < 30.0) {
        // log of the tail constant A in P(T>t) ~ (A/nu) t^{-nu}
        double log_a = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                       0.5 * std::log(nu * pi) + 0.5 * (nu + 1.0) * std::log(nu);
        double log_t = (log_a - std::log(nu) - std::log(tail)) / nu;
        if (log_t < 700.0) {
            double t_pareto = std::exp(log_t);
            if (t_pareto > t) t = t_pareto;
        }
    }
    if (!(t > 0.0) || !std::isfinite(t)) t = 1.0;

    // Newton with bisection fallback on a bracketing interval.
    double lo = 0.0, hi = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 200; ++it) {
        double f = student_t_cdf(t, nu) - p;
        if (f > 0.0) {
            hi = std::min(hi, t);
        } else {
            lo = std::max(lo, t);
        }
        double dfdt = student_t_pdf(t, nu);
        double step = f / std::max(dfdt, 1e-300);
        double t_new = t - step;
        if (!(t_new > lo && t_new < hi)) {
            t_new = std::isinf(hi) ? 2.0 * std::max(t, 1.0) : 0.5 * (lo + hi);
        }
        if (std::fabs(t_new - t) <= 1e-14 * std::max(1.0, std::fabs(t))) {
            return t_new;
        }
        t = t_new;
    }
    return t;
}

double median(std::vector<double> values) {
    if (values.empty()) throw UsageError("median: empty sample");
    std::size_t n = values.size();
    auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(values.begin(), mid, values.end());
    double hi = *mid;
    if (n % 2 == 1) return hi;
    double lo = *std::max_element(values.begin(), mid);
    return 0.5 * (lo + hi);
}

double empirical_quantile(std::vector<double> values, double q) {
    if (values.empty()) throw UsageError("empirical_quantile: empty sample");
    if (!(q >= 0.0 && q <= 1.0)) {
        throw UsageError("empirical_quantile: q must lie in [0,1]");
    }
    std::sort(values.begin(), values.end());
    double pos = q * static_cast<double>(values.size() - 1);
    auto idx = static_cast<std::size_t>(pos);
    if (idx + 1 >= values.size()) return values.back();
    double frac = pos - static_cast<double>(idx);
    return values[idx] * (1.0 - frac) + values[idx + 1] * frac;
}

}  // namespace gar::math
