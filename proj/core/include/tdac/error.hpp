#pragma once

#include <stdexcept>
#include <string>

namespace tdac {

// Base for all library errors. Every operation reports contract violations
// by throwing one of the types below.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid argument or precondition violation.
class InputError : public Error {
 public:
  using Error::Error;
};

// The requested operation is not defined for this configuration, e.g. the
// closed form with a non-identity drive characteristic.
class UnsupportedConfig : public Error {
 public:
  using Error::Error;
};

class ResourceLimit : public Error {
 public:
  using Error::Error;
};

// Transfer curve with zero endpoint span.
class DegenerateCurve : public Error {
 public:
  using Error::Error;
};

class SearchError : public Error {
 public:
  using Error::Error;
};

}  // namespace tdac
