// Copyright 2026 The plfkit Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace plf {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input. `file` and `line` are filled in when known.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what, std::string file = {},
                      std::optional<std::size_t> line = std::nullopt)
      : Error(Format(what, file, line)), file_(std::move(file)), line_(line) {}

  const std::string& file() const noexcept { return file_; }
  std::optional<std::size_t> line() const noexcept { return line_; }

 private:
  static std::string Format(const std::string& what, const std::string& file,
                            std::optional<std::size_t> line) {
    std::string out;
    if (!file.empty()) {
      out += file;
      if (line) out += ":" + std::to_string(*line);
      out += ": ";
    } else if (line) {
      out += "line " + std::to_string(*line) + ": ";
    }
    return out + what;
  }

  std::string file_;
  std::optional<std::size_t> line_;
};

/// Cross-record references that do not resolve (dangling image ids, etc).
class IntegrityError : public Error {
 public:
  using Error::Error;
};

/// A numeric value outside its permitted range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A box that has no area left once clamped to its image.
class OutOfImage : public Error {
 public:
  using Error::Error;
};

class InsufficientImages : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration values (thresholds, recall grid, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace plf
