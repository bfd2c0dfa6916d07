#pragma once
#include <stdexcept>
#include <string>

namespace sdslab {

// Validation failures (bad configuration / preconditions). CLI exit code 1.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical failures (solver / quadrature did not meet its contract). Exit code 2.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SubextremalViolation : ValidationError { using ValidationError::ValidationError; };
struct DomainError          : ValidationError { using ValidationError::ValidationError; };
struct OutOfRange           : ValidationError { using ValidationError::ValidationError; };
struct BoundarySpeedViolation : ValidationError { using ValidationError::ValidationError; };
struct TimelikeViolation    : ValidationError { using ValidationError::ValidationError; };
struct CFLViolation         : ValidationError { using ValidationError::ValidationError; };
struct DomainTooSmall       : ValidationError { using ValidationError::ValidationError; };
struct WindowTooSmall       : ValidationError { using ValidationError::ValidationError; };
struct PositivityGateFailed : ValidationError { using ValidationError::ValidationError; };

struct NonConvergence        : NumericalError { using NumericalError::NumericalError; };
struct SpacelikeViolation    : NumericalError { using NumericalError::NumericalError; };
struct ShootingFailure       : NumericalError { using NumericalError::NumericalError; };
struct ExtrapolationFailure  : NumericalError { using NumericalError::NumericalError; };
struct ExtractionInconsistent: NumericalError { using NumericalError::NumericalError; };
struct FitRejected           : NumericalError { using NumericalError::NumericalError; };
struct SingularOperator      : NumericalError { using NumericalError::NumericalError; };
struct SeriesNotConverged    : NumericalError { using NumericalError::NumericalError; };
struct QuadratureNotConverged: NumericalError { using NumericalError::NumericalError; };
struct ResolutionInsufficient: NumericalError { using NumericalError::NumericalError; };

} // namespace sdslab
