#pragma once

#include <stdexcept>
#include <string>

namespace onpack {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A scalar parameter is outside its admissible range (theta <= 0, eps >= 1, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// A prefix handed to the simulator is not part of the process support.
class SupportError : public Error {
 public:
  using Error::Error;
};

// An instance violates the packing assumptions or an encoding's structure.
class InstanceError : public Error {
 public:
  using Error::Error;
};

// A size cap (tree nodes, DP states, LP dimension) would be exceeded.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Streaming policies received prefixes out of order.
class SequencingError : public Error {
 public:
  using Error::Error;
};

// A caller broke a documented precondition of a callback or input.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// Internal state reached something that the algorithm rules out.
class InvariantError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// A Monte Carlo episode produced a budget violation. `trace` holds the
// offending episode's per-period record.
class AuditFailure : public Error {
 public:
  AuditFailure(const std::string& what, std::string trace)
      : Error(what), trace_(std::move(trace)) {}
  const std::string& trace() const noexcept { return trace_; }

 private:
  std::string trace_;
};

}  // namespace onpack
