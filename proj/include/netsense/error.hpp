#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace netsense {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Input data violates a documented contract (schema, invariant, precondition).
class ValidationError : public Error {
public:
  using Error::Error;
};

/// JSON scenario document could not be parsed or does not match the schema.
class ParseError : public ValidationError {
public:
  ParseError(const std::string &message, std::string field, std::size_t line = 0)
      : ValidationError(message), field_(std::move(field)), line_(line) {}

  const std::string &field() const noexcept { return field_; }
  std::size_t line() const noexcept { return line_; }

private:
  std::string field_;
  std::size_t line_;
};

/// A sensor coincides with the point it is asked to observe.
class GeometryError : public Error {
public:
  using Error::Error;
};

/// A time instant falls outside the sampled window of a record.
class WindowError : public Error {
public:
  using Error::Error;
};

/// An image-quality figure cannot be extracted from the given image.
class MeasurementError : public Error {
public:
  using Error::Error;
};

} // namespace netsense
