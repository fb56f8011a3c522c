#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ulab {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input: bad group literal, mismatched groups, malformed values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A computation was refused because its estimated cost exceeds the budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// A result violated a mathematical invariant the code relies on.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class ParseError : public ConfigError {
 public:
  ParseError(const std::string& what, std::size_t position)
      : ConfigError(what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace ulab
