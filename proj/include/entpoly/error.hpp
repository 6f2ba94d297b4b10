#pragma once

#include <stdexcept>
#include <string>

namespace entpoly {

// Base for every failure raised by the library. The CLI maps the concrete
// subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// SLOC operator annihilated the state (output norm below 1e-12).
class DegenerateOperator : public Error {
 public:
  using Error::Error;
};

// Family parameters produced a zero vector.
class DegenerateFamily : public Error {
 public:
  using Error::Error;
};

class ResourceLimit : public Error {
 public:
  using Error::Error;
};

class NotInformationallyComplete : public Error {
 public:
  using Error::Error;
};

// Spectrum violates the polygon inequalities, so no pure state has it.
class MarginalInfeasible : public Error {
 public:
  using Error::Error;
};

// Purity <= 1/2: the noise bound and therefore the witness are void.
class BoundInapplicable : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

// Too many Monte Carlo trials aborted.
class UnreliableEstimate : public Error {
 public:
  using Error::Error;
};

}  // namespace entpoly
