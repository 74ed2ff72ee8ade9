#pragma once

#include <stdexcept>
#include <string>

namespace gar {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed or inconsistent input data (CSV parse failures, bad schemas,
/// out-of-range horizons). CLI exit code 3.
class DataError : public Error {
public:
    using Error::Error;
};

/// Estimator-level failures: non-convergence, too few exceedances, singular
/// curvature, nonexistent moments. CLI exit code 4.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Invalid arguments to an operation (bad probabilities, dimension
/// mismatches). CLI exit code 2 when raised from flag validation.
class UsageError : public Error {
public:
    using Error::Error;
};

}  // namespace gar
