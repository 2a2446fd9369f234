#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rgop {

/// Base class for all rgop failures.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape or size mismatch between inputs.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Caller passed a value outside the operation's contract.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration (out-of-range hyperparameter, bad mode combo).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed input data. Carries the byte offset where parsing failed.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t byte_offset)
      : Error(what + " (at byte " + std::to_string(byte_offset) + ")"),
        byte_offset_(byte_offset) {}

  std::size_t byte_offset() const { return byte_offset_; }

 private:
  std::size_t byte_offset_ = 0;
};

/// Filesystem failure with the offending path in the message.
class IoError : public Error {
 public:
  IoError(const std::string& what, const std::string& path)
      : Error(what + ": " + path), path_(path) {}

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Training loss went non-finite; message holds the last finite losses.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace rgop
