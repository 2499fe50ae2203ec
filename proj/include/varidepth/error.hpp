#pragma once

#include <stdexcept>
#include <string>

namespace varidepth {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Violated precondition: shape mismatch, out-of-range argument, behind-camera
// projection, and similar caller mistakes.
class DomainError : public Error {
public:
  using Error::Error;
};

// A fit that cannot be computed: constant regressor, no RANSAC consensus.
class DegenerateError : public Error {
public:
  using Error::Error;
};

// A reduction was requested over an empty valid-pixel set.
class EmptyDomainError : public Error {
public:
  using Error::Error;
};

// Malformed or unsupported file content.
class FormatError : public Error {
public:
  using Error::Error;
};

// Inconsistent configuration, e.g. distillation enabled without an expert map.
class ConfigError : public Error {
public:
  using Error::Error;
};

// A loss evaluation produced a non-finite value. `term` names the offender.
class NumericalError : public Error {
public:
  NumericalError(std::string term_name, const std::string& what)
      : Error(what), term(std::move(term_name)) {}
  std::string term;
};

} // namespace varidepth
