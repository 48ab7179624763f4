#pragma once

#include <stdexcept>
#include <string>

namespace alphaode {

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Evaluation hit a singularity of an elementary operation
// (log of a non-positive value, division by zero, ...).
struct DomainError : SolverError {
    using SolverError::SolverError;
};

struct MalformedExpression : SolverError {
    using SolverError::SolverError;
};

struct DimensionMismatch : SolverError {
    using SolverError::SolverError;
};

struct UnboundParameter : SolverError {
    using SolverError::SolverError;
};

// The truncated coefficient series shows no sign of converging at the
// requested step size.
struct DivergentSeries : SolverError {
    using SolverError::SolverError;
};

struct MaxStepsExceeded : SolverError {
    using SolverError::SolverError;
};

struct UnsupportedFixture : SolverError {
    using SolverError::SolverError;
};

struct InvalidConfig : SolverError {
    using SolverError::SolverError;
};

}  // namespace alphaode
