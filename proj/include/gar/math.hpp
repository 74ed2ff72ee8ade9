#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace gar::math {

inline constexpr double pi = 3.14159265358979323846;

/// Standard normal density.
double norm_pdf(double z);

/// Standard normal CDF, accurate in both tails (erfc based).
double norm_cdf(double z);

/// Inverse standard normal CDF for p in (0,1). Accuracy ~1e-15 after
/// one Halley refinement of the rational initial guess.
double norm_inv(double p);

/// Regularized incomplete beta function I_x(a,b), x in [0,1], a,b > 0.
/// Continued-fraction evaluation (relative accuracy ~1e-14).
double incomplete_beta(double a, double b, double x);

/// Student-t density with nu degrees of freedom.
double student_t_pdf(double t, double nu);

/// Student-t CDF with nu degrees of freedom.
double student_t_cdf(double t, double nu);

/// Student-t quantile: inverse of student_t_cdf in its first argument.
double student_t_quantile(double p, double nu);

/// Sample median; even lengths average the two central order statistics.
double median(std::vector<double> values);

/// Empirical quantile with linear interpolation between order statistics
/// (index q*(n-1)). q must lie in [0,1].
double empirical_quantile(std::vector<double> values, double q);

/// Deterministic uniform/normal generator, identical across platforms.
/// mt19937_64 is pinned by the standard; the std distributions are not,
/// so the mappings to (0,1) and to normals live here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform draw strictly inside (0,1): 53 random bits centered in the bin.
    double uniform() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1p-53;
    }

    /// Standard normal via inverse CDF.
    double normal() { return norm_inv(uniform()); }

private:
    std::mt19937_64 engine_;
};

}  // namespace gar::math
