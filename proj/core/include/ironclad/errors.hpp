#pragma once

#include <stdexcept>
#include <string>

namespace ironclad {

// Raised when a fixed-point/bisection solve cannot bracket a root.
class NoRootError : public std::runtime_error {
 public:
  explicit NoRootError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a maximizer expected in the open interval lands on a boundary.
class BoundaryMaximizerError : public std::runtime_error {
 public:
  explicit BoundaryMaximizerError(const std::string& what) : std::runtime_error(what) {}
};

class MalformedSymbolError : public std::runtime_error {
 public:
  explicit MalformedSymbolError(const std::string& what) : std::runtime_error(what) {}
};

class InsufficientSamplesError : public std::runtime_error {
 public:
  explicit InsufficientSamplesError(const std::string& what) : std::runtime_error(what) {}
};

class TraceError : public std::runtime_error {
 public:
  explicit TraceError(const std::string& what) : std::runtime_error(what) {}
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ironclad
