#pragma once

#include <stdexcept>
#include <string>

namespace gerbe {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input fails a structural invariant (unitarity, anti-Hermiticity, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A mode, cut or index lies outside the truncation window.
class RangeError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

// A spectral cut collides with the spectrum.
class CoverError : public Error {
 public:
  using Error::Error;
};

class CompositionError : public Error {
 public:
  using Error::Error;
};

class ResourceError : public Error {
 public:
  using Error::Error;
};

// Sampling or truncation is too coarse to certify the requested quantity.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

class PrecisionError : public Error {
 public:
  using Error::Error;
};

class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class CapabilityError : public Error {
 public:
  using Error::Error;
};

}  // namespace gerbe
