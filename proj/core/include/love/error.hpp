#pragma once

#include <stdexcept>
#include <string>

namespace love {

/// Base for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value is outside the domain an operation accepts (bad coordinate,
/// resolution mismatch, empty input where one is required).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Input does not follow the expected file/stream layout.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// A snapshot written by a different format version.
class VersionError : public FormatError {
 public:
  VersionError(unsigned found, unsigned expected)
      : FormatError("unsupported snapshot version " + std::to_string(found) +
                    " (expected " + std::to_string(expected) + ")"),
        found_(found) {}

  unsigned found() const noexcept { return found_; }

 private:
  unsigned found_;
};

/// Checksum mismatch or structurally corrupt persisted data.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace love
