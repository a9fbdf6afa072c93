#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ethnomap {

// Every error raised by the library derives from Error. The CLI maps the
// category onto a process exit code.
enum class ErrorCategory { validation, dependency };

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error(ErrorCategory::validation, what) {}
};

class ParseError : public ValidationError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : ValidationError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class NotFoundError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InvalidPairError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A cluster spanning every node has no outside to measure distance to.
class UndefinedDistanceError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class StandardizationError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A pipeline stage needs an artifact that an earlier stage did not produce.
class DependencyError : public Error {
 public:
  explicit DependencyError(const std::string& path)
      : Error(ErrorCategory::dependency, "missing required artifact: " + path), path_(path) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace ethnomap
