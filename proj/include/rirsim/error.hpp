#pragma once

#include <stdexcept>
#include <string>

namespace rirsim {

// Base class for every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// An image source coincides with a receiver (zero propagation distance).
class DegenerateGeometry : public Error {
 public:
  using Error::Error;
};

// Requested buffer exceeds the engine's allocation limit.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Sabine's formula has a zero denominator (every wall perfectly reflective).
class NonFiniteT60 : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

// A reverberation target cannot be reached with physical coefficients.
class InfeasibleTarget : public Error {
 public:
  using Error::Error;
};

}  // namespace rirsim
