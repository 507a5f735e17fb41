#pragma once

#include <stdexcept>
#include <string>

namespace eaplab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Point lies outside a space's base box or fiber annulus.
struct PointOutsideDomain : Error {
  using Error::Error;
};

/// Fiber coordinates too close to the excluded zero section.
struct EvaluationDomainError : Error {
  using Error::Error;
};

/// A frame block determinant fell below the invertibility threshold.
struct SingularFrame : Error {
  using Error::Error;
};

struct UnknownSpace : Error {
  using Error::Error;
};

/// Tensor slot signature does not match the operation's expectation.
struct SignatureMismatch : Error {
  using Error::Error;
};

struct InconsistentFrame : Error {
  using Error::Error;
};

struct SingularMetric : Error {
  using Error::Error;
};

struct UnknownConnectionTag : Error {
  using Error::Error;
};

struct UnknownObject : Error {
  using Error::Error;
};

struct PreconditionNotCartan : Error {
  using Error::Error;
};

struct PreconditionNotBerwald : Error {
  using Error::Error;
};

struct PreconditionNotCB : Error {
  using Error::Error;
};

}  // namespace eaplab
