#pragma once

#include <stdexcept>
#include <string>

namespace agesampler {

/// Base of every error raised by the library. Callers that only need a
/// message can catch this; the CLI maps the concrete types to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A row of the transition matrix does not sum to one, or has a negative entry.
class NotStochastic : public Error {
 public:
  using Error::Error;
};

/// The chain is reducible or periodic.
class NotErgodic : public Error {
 public:
  using Error::Error;
};

class MalformedProgram : public Error {
 public:
  using Error::Error;
};

/// The constraint set admits no solution, either detected up front or by
/// phase 1 of the simplex method.
class Infeasible : public Error {
 public:
  using Error::Error;
};

class Unbounded : public Error {
 public:
  using Error::Error;
};

/// The chain of observed states under a policy has more than one closed class,
/// so long-run averages depend on the initial state.
class InducedNotErgodic : public Error {
 public:
  using Error::Error;
};

class PeriodExceedsM : public Error {
 public:
  using Error::Error;
};

/// Analytic evaluation of an extracted policy disagrees with the LP objective.
class ObjectiveMismatch : public Error {
 public:
  using Error::Error;
};

class TooLarge : public Error {
 public:
  using Error::Error;
};

}  // namespace agesampler
