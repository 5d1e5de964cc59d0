#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sherk {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidGridError : public Error {
 public:
  using Error::Error;
};

class GridMismatchError : public Error {
 public:
  GridMismatchError() : Error("fields live on different grids") {}
};

class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

/// Raised when a time step produces a non-finite value.
class BlowUpError : public Error {
 public:
  BlowUpError(std::int64_t step, double t)
      : Error("non-finite solution at step " + std::to_string(step) +
              " (t = " + std::to_string(t) + ")"),
        step_(step),
        t_(t) {}

  std::int64_t step() const noexcept { return step_; }
  double time() const noexcept { return t_; }

 private:
  std::int64_t step_;
  double t_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace sherk
