#pragma once

#include <stdexcept>
#include <string>

namespace vmc {

/// Broad failure classes. The CLI maps each one to a distinct exit code.
enum class ErrorCategory {
  kConfig = 2,
  kValidation = 3,
  kRuntime = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

/// Bad parameters, malformed config or snapshot files.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorCategory::kConfig, what) {}
};

/// Model-integrity problems: unknown ids, constraint-violating maps.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error(ErrorCategory::kValidation, what) {}
};

/// Non-positive bandwidth on a cross-PM move.
class NetworkModelError : public Error {
 public:
  explicit NetworkModelError(const std::string& what)
      : Error(ErrorCategory::kRuntime, what) {}
};

/// No feasible PM left for a VM.
class InfeasibleError : public Error {
 public:
  explicit InfeasibleError(const std::string& what)
      : Error(ErrorCategory::kRuntime, what) {}
};

}  // namespace vmc
