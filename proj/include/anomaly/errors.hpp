#pragma once

#include <stdexcept>
#include <string>

namespace anomaly {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Bad argument or value outside the documented domain.
class ParameterError : public Error {
public:
  using Error::Error;
};

// Operation not defined for this model kind.
class UnsupportedModelError : public Error {
public:
  using Error::Error;
};

// Numerical linear algebra failure (singular or near-singular metric).
class NumericError : public Error {
public:
  NumericError(const std::string& what, double condition_estimate)
      : Error(what), condition_estimate(condition_estimate) {}
  double condition_estimate;
};

// A result was produced but the requested accuracy was not reached.
class AccuracyError : public Error {
public:
  AccuracyError(const std::string& what, double best_value, double error_estimate)
      : Error(what), best_value(best_value), error_estimate(error_estimate) {}
  double best_value;
  double error_estimate;
};

// Job document rejected; json_pointer locates the offending field.
class JobParseError : public Error {
public:
  JobParseError(const std::string& what, std::string json_pointer)
      : Error(what + " (at " + json_pointer + ")"), json_pointer(std::move(json_pointer)) {}
  std::string json_pointer;
};

} // namespace anomaly
