#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace carpet {

enum class ErrorKind {
  Domain,
  HypothesisViolation,
  NonFiniteState,
  NoCrossing,
  NoBracket,
  PathTerminates,
  BadBracket,
  UndecidedVerdict,
  QuadratureNotConverged,
  Parse,
  Validation,
  Mismatch,
};

std::string_view to_string(ErrorKind kind);

/// Base of every error raised by the library. The kind drives the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// A phase path hit p = 0 before reaching its target density.
class PathTerminates : public Error {
 public:
  PathTerminates(double u_stop, const std::string& what)
      : Error(ErrorKind::PathTerminates, what), u_stop_(u_stop) {}
  double u_stop() const noexcept { return u_stop_; }

 private:
  double u_stop_;
};

/// A bisection probe could not be classified.
class UndecidedVerdict : public Error {
 public:
  UndecidedVerdict(double parameter, const std::string& what)
      : Error(ErrorKind::UndecidedVerdict, what), parameter_(parameter) {}
  double parameter() const noexcept { return parameter_; }

 private:
  double parameter_;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what) : Error(ErrorKind::Parse, what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error(ErrorKind::Validation, field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace carpet
