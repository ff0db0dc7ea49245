#pragma once

#include <stdexcept>
#include <string>

namespace valveflow {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A root finder ran out of iterations or lost its bracket.
class NoConvergence : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the domain of an operation (e.g. hat_u above q-bar).
class OutOfRange : public Error {
 public:
  using Error::Error;
};

/// A custom valve law returned a flow outside [0, Q-bar(u_l)].
class FlowOutOfRange : public Error {
 public:
  using Error::Error;
};

/// A numerical update produced a non-positive density.
class CellLeftOmega : public Error {
 public:
  using Error::Error;
};

class DegenerateField : public Error {
 public:
  using Error::Error;
};

/// Waves reached the last cells of the computational domain.
class BoundaryReached : public Error {
 public:
  using Error::Error;
};

/// The exact wave construction met an interaction it does not handle.
class ScenarioViolation : public Error {
 public:
  using Error::Error;
};

class OutOfDomain : public Error {
 public:
  using Error::Error;
};

class OutOfValidity : public Error {
 public:
  using Error::Error;
};

/// A flow record does not cover the requested averaging horizon.
class SpanMismatch : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration or command line.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace valveflow
