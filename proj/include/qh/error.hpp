#pragma once

#include <stdexcept>
#include <string>

namespace qh {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter violates its documented range (nonpositive radius, p < 1, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Vectors of different dimension were combined, or a vector does not match its space.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A point or an edge lies outside the domain it is evaluated in.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature did not reach its tolerance within the depth limit.
class QuadratureError : public Error {
 public:
  using Error::Error;
};

/// A randomized construction could not be realized within its attempt budget.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// A net failed its covering verification.
class CoveringError : public Error {
 public:
  using Error::Error;
};

}  // namespace qh
