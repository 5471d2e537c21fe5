#pragma once

#include <stdexcept>
#include <string>

namespace cvs {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// vacuum or density floor violations
class ThermoError : public Error {
 public:
  using Error::Error;
};

// degenerate flattening map (jac < 1/2, |psi| >= 10)
class GeometryError : public Error {
 public:
  using Error::Error;
};

class StructureError : public Error {
 public:
  using Error::Error;
};

class RecoveryError : public Error {
 public:
  using Error::Error;
};

class ConstructionError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace cvs
