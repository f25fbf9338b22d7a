#pragma once

#include <stdexcept>
#include <string>

namespace tunebench {

// Base of every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A conditional P(C|e1,e2) was requested on an (e1,e2) slice with no mass.
class DegenerateSlice : public Error {
 public:
  using Error::Error;
};

// Evidence marginal outside [0,1] or not reachable from the prior's support.
class InvalidProbe : public Error {
 public:
  using Error::Error;
};

// Proportional fitting did not reach its tolerance within the iteration cap.
class NoConvergence : public Error {
 public:
  using Error::Error;
};

class OptimizerFailure : public Error {
 public:
  using Error::Error;
};

class ZeroVariance : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

// Malformed or out-of-range content in a persisted file.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace tunebench
