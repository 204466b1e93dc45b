#pragma once

#include <stdexcept>
#include <string>

namespace ttc {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: shape mismatches, out-of-range indices, bad config values.
class InputError : public Error {
public:
  using Error::Error;
};

/// A requested object would exceed a configured size cap.
class ResourceError : public Error {
public:
  using Error::Error;
};

/// Linear algebra or iteration failed (singular system, non-finite values).
class NumericalError : public Error {
public:
  using Error::Error;
};

/// A construction collapsed numerically (e.g. a recurrence coefficient hit zero).
class DegeneracyError : public Error {
public:
  using Error::Error;
};

/// A point lies outside the computational domain.
class DomainError : public Error {
public:
  using Error::Error;
};

class UnsupportedError : public Error {
public:
  using Error::Error;
};

class ConvergenceError : public Error {
public:
  using Error::Error;
};

} // namespace ttc
