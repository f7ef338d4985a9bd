#pragma once

#include <stdexcept>
#include <string>

namespace hilbert {

// Base of every exception this library throws on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Caller handed us arguments that violate a documented precondition.
struct PreconditionError : Error {
  using Error::Error;
};

// The body description itself is unusable.
struct BodySpecError : Error {
  using Error::Error;
};

// An estimator or quadrature could not produce a trustworthy number.
struct NumericError : Error {
  using Error::Error;
};

struct DimensionMismatch : PreconditionError {
  using PreconditionError::PreconditionError;
};

struct PointOutside : PreconditionError {
  using PreconditionError::PreconditionError;
};

struct ZeroDirection : PreconditionError {
  using PreconditionError::PreconditionError;
};

// A test function shape that does not match the body it is paired with.
struct BodyMismatch : PreconditionError {
  using PreconditionError::PreconditionError;
};

struct InvalidBodySpec : BodySpecError {
  using BodySpecError::BodySpecError;
};

// The body contains a whole line, so chord-based quantities degenerate.
struct ImproperBody : BodySpecError {
  using BodySpecError::BodySpecError;
};

struct UnboundedBody : BodySpecError {
  using BodySpecError::BodySpecError;
};

struct MissingBBox : BodySpecError {
  using BodySpecError::BodySpecError;
};

// The requested affine image leaves the representable body classes.
struct UnrepresentableImage : BodySpecError {
  using BodySpecError::BodySpecError;
};

struct RejectionStall : NumericError {
  using NumericError::NumericError;
};

// A radial integrand came out infinite or not-a-number.
struct NonFiniteRadial : NumericError {
  using NumericError::NumericError;
};

struct RegionEscapesBody : NumericError {
  using NumericError::NumericError;
};

struct DivergentIntegral : NumericError {
  using NumericError::NumericError;
};

struct UnderSampled : NumericError {
  using NumericError::NumericError;
};

struct DegenerateFit : NumericError {
  using NumericError::NumericError;
};

struct SupportEscapesBody : NumericError {
  using NumericError::NumericError;
};

struct ZeroDenominator : NumericError {
  using NumericError::NumericError;
};

}  // namespace hilbert
