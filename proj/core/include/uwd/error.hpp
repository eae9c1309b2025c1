#pragma once

#include <stdexcept>
#include <string>

namespace uwd {

// Base of every error raised by the library. kind() is a stable, machine
// readable tag used in CLI diagnostics.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& message) : Error("parameter", message) {}
};

class GeometryError : public Error {
 public:
  explicit GeometryError(const std::string& message) : Error("geometry", message) {}
};

class EstimationError : public Error {
 public:
  explicit EstimationError(const std::string& message) : Error("estimation", message) {}
};

class DegenerateInputError : public Error {
 public:
  explicit DegenerateInputError(const std::string& message)
      : Error("degenerate_input", message) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error("io", message) {}
};

class OptimizationError : public Error {
 public:
  explicit OptimizationError(const std::string& message) : Error("optimization", message) {}
};

}  // namespace uwd
