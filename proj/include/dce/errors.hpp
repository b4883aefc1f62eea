#pragma once

#include <stdexcept>
#include <string>

namespace dce {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mirror geometry that would collapse the cavity or is otherwise invalid.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// A mirror path reaches or exceeds the speed of light, so t +/- X(t) is not
/// invertible.
class SuperluminalError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the region where a quantity is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Iterative procedure did not reach its tolerance or bound.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// No effective mirror position solves the defining equation at this time.
class NoEffectivePosition : public Error {
 public:
  using Error::Error;
};

/// First-order adiabatic Moore functions stop being increasing; the
/// reference motion is too fast for the construction.
class AdiabaticOrderViolation : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace dce
