#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace listflow {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad field data or an invalid grid/stencil request.
class FieldError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed checkpoint, CSV or header.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// A metric node whose smallest eigenvalue fell below the SPD floor.
class DegenerationError : public Error {
 public:
  DegenerationError(std::size_t node, double eigenvalue, std::optional<double> time = std::nullopt);

  std::size_t node() const noexcept { return node_; }
  double eigenvalue() const noexcept { return eigenvalue_; }
  std::optional<double> time() const noexcept { return time_; }

  DegenerationError at_time(double t) const { return DegenerationError(node_, eigenvalue_, t); }

 private:
  static std::string describe(std::size_t node, double eigenvalue, std::optional<double> time);

  std::size_t node_;
  double eigenvalue_;
  std::optional<double> time_;
};

}  // namespace listflow
