#pragma once

#include <stdexcept>
#include <string>

namespace dicke {

// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class NumericalBreakdown : public Error {
 public:
  using Error::Error;
};

class NotConverged : public Error {
 public:
  using Error::Error;
};

class SizeLimit : public Error {
 public:
  using Error::Error;
};

// Period-2 oscillation of a fixed-point iteration.
class CycleDetected : public Error {
 public:
  using Error::Error;
};

class BracketError : public Error {
 public:
  BracketError(const std::string& what, double value_lo, double value_hi)
      : Error(what), value_lo_(value_lo), value_hi_(value_hi) {}

  double value_lo() const { return value_lo_; }
  double value_hi() const { return value_hi_; }

 private:
  double value_lo_;
  double value_hi_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dicke
