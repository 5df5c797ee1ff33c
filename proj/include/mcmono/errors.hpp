#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mcm {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A chart Jacobian whose Gram determinant is at or below the noise floor.
struct SingularChartError : Error {
    using Error::Error;
};

// Point lies outside the half-space foliated by the ball family.
struct OutsideFoliationError : Error {
    using Error::Error;
};

// Level-set gradient requested at the family vertex (f = 0).
struct GradientUndefinedError : Error {
    using Error::Error;
};

// Level value too close to a critical value of the restricted function.
struct RegularValueError : Error {
    using Error::Error;
};

// Scale/time parameter outside the admissible range.
struct DomainError : Error {
    using Error::Error;
};

// Quadrature finished but the achieved error bound exceeds the request.
struct ToleranceNotMetError : Error {
    ToleranceNotMetError(const std::string& msg, double achievedBound)
        : Error(msg), achieved(achievedBound) {}
    double achieved;
};

// Richardson extrapolation failed to settle; carries the raw sequence.
struct ExtrapolationError : Error {
    ExtrapolationError(const std::string& msg, std::vector<double> seq)
        : Error(msg), sequence(std::move(seq)) {}
    std::vector<double> sequence;
};

// Invalid experiment configuration (bad key, bad value, missing field).
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace mcm
