#pragma once

#include <stdexcept>
#include <string>

namespace trifuse {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tensor shape or axis violations (mismatched extents, bad axis, ...).
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Numeric domain violations (log of a nonpositive value, empty softmax slice, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration detected at construction or parse time.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// File I/O failures, including corrupt or truncated containers.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace trifuse
