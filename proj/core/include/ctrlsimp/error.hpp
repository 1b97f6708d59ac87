#pragma once

#include <stdexcept>
#include <string>

namespace ctrlsimp {

// Error hierarchy. The CLI maps each family onto an exit status:
// InputError/ParseError -> 1, ConfigError -> 2, SystemError -> 3.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or misaligned input data (length mismatch, bad line).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Text that does not follow a required grammar (control tokens, CoNLL-U,
/// frequency lists). Carries an optional 1-based line number.
class ParseError : public InputError {
 public:
  explicit ParseError(const std::string& what, std::size_t line = 0)
      : InputError(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A mathematical precondition failed (empty quartile input, negative ratio).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// WordRank of the source is zero, so no ratio can be formed.
class DegenerateSourceError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A required resource is missing or unusable (e.g. an empty frequency table).
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Requested work cannot run with the given configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An external simplification system failed.
class SystemError : public Error {
 public:
  using Error::Error;
};

}  // namespace ctrlsimp
