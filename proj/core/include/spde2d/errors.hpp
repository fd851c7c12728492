#pragma once

#include <stdexcept>
#include <string>

namespace spde2d {

/// Parameters outside the documented domain (nonpositive theta2, b outside
/// (0, 1/2), odd m1, ...). Checked eagerly at construction where possible.
struct InvalidParameters : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Two gridded inputs that must share a grid do not.
struct GridMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A quadratic variation is zero: all-zero field, sigma = 0, or an empty
/// design. Raised instead of producing NaN.
struct DegenerateVariation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The psi quadrature could not certify the requested relative tolerance;
/// carries the residual error bound it did achieve.
struct ToleranceNotAchieved : std::runtime_error {
    ToleranceNotAchieved(const std::string& what, double residual)
        : std::runtime_error(what), residual_bound(residual) {}
    double residual_bound;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace spde2d
