#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dpis {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Message plus length header does not fit the cover under the active scheme.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// The recovered length header asks for more bits than the image can hold.
// Usual causes: wrong key, tampered image, or an image that was never embedded.
class MalformedPayload : public Error {
 public:
  using Error::Error;
};

class UnsupportedFormat : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class CorruptFile : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& reason)
      : Error("line " + std::to_string(line) + ": " + reason), line_(line), reason_(reason) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t line_;
  std::string reason_;
};

}  // namespace dpis
