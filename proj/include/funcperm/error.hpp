#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace funcperm {

// Every error raised by the library derives from this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. Line and column are 1-based; zero means "not applicable".
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column = 0)
      : Error(what), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class GridError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::string key = {})
      : Error(what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Thrown when fewer eigenvalues than requested clear the positivity tolerance.
class RankError : public Error {
 public:
  RankError(const std::string& what, std::size_t usable)
      : Error(what), usable_(usable) {}

  std::size_t usable() const noexcept { return usable_; }

 private:
  std::size_t usable_;
};

}  // namespace funcperm
