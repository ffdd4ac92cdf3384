#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace eigenbound {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class NonFiniteError : public Error {
 public:
  using Error::Error;
};

// Raised by theorem1_radius when the inner discriminant is negative beyond
// the clamp window, i.e. the supplied t cannot be a geometric multiplicity.
class DiscriminantError : public Error {
 public:
  DiscriminantError(const std::string& what, double discriminant)
      : Error(what), discriminant_(discriminant) {}
  double discriminant() const noexcept { return discriminant_; }

 private:
  double discriminant_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace eigenbound
