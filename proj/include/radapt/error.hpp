#pragma once

#include <stdexcept>
#include <string>

namespace radapt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class OutOfDomain : public Error {
 public:
  using Error::Error;
};

/// A function failed the admissibility test (wrong boundary values).
class Inadmissible : public Error {
 public:
  using Error::Error;
};

class NotAvailable : public Error {
 public:
  using Error::Error;
};

/// Non-finite values or failed post-solve checks. Carries the offending
/// abscissa when there is one.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what, double where = 0.0)
      : Error(what), where_(where) {}
  double where() const { return where_; }

 private:
  double where_;
};

}  // namespace radapt
