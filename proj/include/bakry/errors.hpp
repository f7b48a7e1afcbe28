#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bakry {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, const std::string& what)
      : Error("syntax error at offset " + std::to_string(offset) + ": " + what),
        offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class UnknownIdentifier : public Error {
 public:
  UnknownIdentifier(std::size_t offset, const std::string& name)
      : Error("unknown identifier '" + name + "' at offset " + std::to_string(offset)),
        offset_(offset),
        name_(name) {}
  std::size_t offset() const noexcept { return offset_; }
  const std::string& name() const noexcept { return name_; }

 private:
  std::size_t offset_;
  std::string name_;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Raised when an expression is evaluated outside its domain (log/sqrt of a
/// non-positive value, division by zero). Carries the printed sub-expression.
class DomainError : public Error {
 public:
  DomainError(const std::string& subexpr, const std::string& what)
      : Error("domain error in '" + subexpr + "': " + what), subexpr_(subexpr) {}
  const std::string& subexpression() const noexcept { return subexpr_; }

 private:
  std::string subexpr_;
};

class DegenerateMetric : public Error {
 public:
  using Error::Error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class EmptyPlan : public Error {
 public:
  using Error::Error;
};

class PeriodicFace : public Error {
 public:
  using Error::Error;
};

class SingularFace : public Error {
 public:
  using Error::Error;
};

class ResolutionTooSmall : public Error {
 public:
  using Error::Error;
};

class NoBoundary : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

class ConvergenceFailure : public Error {
 public:
  ConvergenceFailure(const std::string& what, double achieved)
      : Error(what + " (achieved residual " + std::to_string(achieved) + ")"),
        achieved_(achieved) {}
  double achieved_residual() const noexcept { return achieved_; }

 private:
  double achieved_;
};

class ZeroVector : public Error {
 public:
  using Error::Error;
};

class RankDeficient : public Error {
 public:
  using Error::Error;
};

class NonConstantWeight : public Error {
 public:
  using Error::Error;
};

class NotAxisymmetric : public Error {
 public:
  using Error::Error;
};

}  // namespace bakry
