#pragma once

#include <stdexcept>
#include <string>

namespace mtqite {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live on registers of different sizes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A dense or enumerative routine was asked for more qubits than it supports.
class SizeCapError : public Error {
 public:
  using Error::Error;
};

/// A rotation generator is not hermitian (odd phase) or not anti-hermitian.
class InvalidGeneratorError : public Error {
 public:
  using Error::Error;
};

/// The QITE normalization c became non-positive; the time step is outside
/// the range where the expansion is meaningful.
class DegenerateNormalizationError : public Error {
 public:
  DegenerateNormalizationError(const std::string& what, double c)
      : Error(what), c_(c) {}
  double c() const noexcept { return c_; }

 private:
  double c_;
};

class InputError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class RunError : public Error {
 public:
  using Error::Error;
};

}  // namespace mtqite
