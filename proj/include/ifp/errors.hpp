#pragma once

#include <stdexcept>

namespace ifp {

// Base of every error raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An argument lies outside its declared domain (range, unknown label, ...).
struct DomainError : Error {
  using Error::Error;
};

// A value object could not be built from the given data.
struct ConstructionError : Error {
  using Error::Error;
};

// A grid search exhausted its grid without finding a qualifying value.
struct WitnessNotFoundError : Error {
  using Error::Error;
};

// A caller-checkable precondition of an operation does not hold.
struct PreconditionError : Error {
  using Error::Error;
};

// A theorem hypothesis required by a solver could not be certified.
struct HypothesisError : Error {
  using Error::Error;
};

// A property the theory guarantees was observed to fail; signals a bug or
// an unsound blackbox input, never a normal outcome.
struct InvariantViolationError : Error {
  using Error::Error;
};

// A configured resource cap (enumeration size, ...) would be exceeded.
struct ResourceError : Error {
  using Error::Error;
};

// An instance document failed to parse; the message carries a field path.
struct ParseError : Error {
  using Error::Error;
};

}  // namespace ifp
