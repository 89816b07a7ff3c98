#pragma once

#include <stdexcept>
#include <string>

namespace payne {

/// Base class for every error raised by the library. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Requested problem exceeds a configured memory / size guard.
class SizeError : public Error {
public:
  using Error::Error;
};

/// Requested entry outside a tabulated or computed range.
class RangeError : public Error {
public:
  using Error::Error;
};

/// Geometry that cannot be assembled (degenerate triangle, broken boundary loop).
class MeshError : public Error {
public:
  using Error::Error;
};

/// Operation requested on an incompatible element kind.
class KindError : public Error {
public:
  using Error::Error;
};

/// A factorization that must succeed failed (non-SPD mass, singular system).
class FactorizationError : public Error {
public:
  using Error::Error;
};

/// Input vector violates a constraint the operation relies on.
class ConstraintError : public Error {
public:
  using Error::Error;
};

/// Operation called outside its documented regime.
class PreconditionError : public Error {
public:
  using Error::Error;
};

/// The spectral parameter sits on (or too close to) an excluded eigenvalue.
class ExcludedSpectrumError : public Error {
public:
  ExcludedSpectrumError(const std::string& what, double lambda, double eigenvalue)
      : Error(what), lambda_(lambda), eigenvalue_(eigenvalue) {}

  double lambda() const noexcept { return lambda_; }
  /// Nearest offending discrete eigenvalue (NaN when unknown).
  double eigenvalue() const noexcept { return eigenvalue_; }

private:
  double lambda_;
  double eigenvalue_;
};

/// Malformed configuration or command line. Mapped to exit code 2.
class ConfigError : public Error {
public:
  using Error::Error;
};

}  // namespace payne
