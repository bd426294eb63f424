#pragma once

#include <stdexcept>
#include <string>

namespace wextractor {

/// Malformed clue table or ruleset.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Text that holds no usable monetary amount.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A pointing pattern could not be built from a fragment.
class SynthesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A pattern expression broke the numeric-region layout it is expected to have.
class PatternLayoutError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConflictError : public std::runtime_error {
 public:
  ConflictError(const std::string& what, std::string existing_id)
      : std::runtime_error(what), existing_id_(std::move(existing_id)) {}

  const std::string& existing_id() const noexcept { return existing_id_; }

 private:
  std::string existing_id_;
};

}  // namespace wextractor
