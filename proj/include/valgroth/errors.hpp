#pragma once

#include <stdexcept>
#include <string>

namespace valgroth {

/// Base class for every error raised by the workbench.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A result cannot be decided from the digits/terms currently known.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

/// Operation applied outside its mathematical domain (inverting zero,
/// residue of a non-integral element, n-th root of a non-power, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Value exists mathematically but has no exact representation here
/// (e.g. a cube root of 2 in the ordered-rational model of R).
class RepresentationError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A piecewise map saw zero or several guards fire on one point.
class PartitionError : public Error {
 public:
  using Error::Error;
};

}  // namespace valgroth
