#pragma once

#include <stdexcept>
#include <string>

namespace acp {

/// Root of every error thrown by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (expressions, model files, CLI arguments).
class InputError : public Error {
 public:
  using Error::Error;
};

class SyntaxError : public InputError {
 public:
  SyntaxError(int line, int column, std::string expected)
      : InputError("syntax error at " + std::to_string(line) + ":" +
                   std::to_string(column) + ": expected " + expected),
        line_(line),
        column_(column),
        expected_(std::move(expected)) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  int line_;
  int column_;
  std::string expected_;
};

class UnknownIdentifier : public InputError {
 public:
  UnknownIdentifier(std::string name, int line, int column)
      : InputError("unknown identifier '" + name + "' at " +
                   std::to_string(line) + ":" + std::to_string(column)),
        name_(std::move(name)) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class NonIntegerExponent : public InputError {
 public:
  NonIntegerExponent(int line, int column)
      : InputError("exponent must be an integer literal at " +
                   std::to_string(line) + ":" + std::to_string(column)) {}
};

/// Numeric evaluation left the domain of a builtin (ln, sqrt, division).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A derivative was requested beyond what a field's 2-jet budget supports.
class OrderBudgetExceeded : public Error {
 public:
  OrderBudgetExceeded(int requested, int budget)
      : Error("jet order " + std::to_string(requested) +
              " requested but field supports only " + std::to_string(budget)),
        requested_(requested),
        budget_(budget) {}
  int requested() const noexcept { return requested_; }
  int budget() const noexcept { return budget_; }

 private:
  int requested_;
  int budget_;
};

class DegreeOverflow : public Error {
 public:
  using Error::Error;
};

class DegreeUnderflow : public Error {
 public:
  using Error::Error;
};

/// Point-located failure of a precondition; carries the offending residual.
class ResidualError : public Error {
 public:
  ResidualError(const std::string& what, double residual)
      : Error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class NotAlmostCoupling : public ResidualError {
 public:
  explicit NotAlmostCoupling(double residual)
      : ResidualError("bivector has a nonzero (1,1) component", residual) {}
};

class OutsideCouplingDomain : public Error {
 public:
  explicit OutsideCouplingDomain(double kappa)
      : Error("point outside the coupling domain (kappa = " +
              std::to_string(kappa) + ")") {}
};

class OutsideDomain : public Error {
 public:
  using Error::Error;
};

class EmptyDomain : public Error {
 public:
  using Error::Error;
};

class EmptyBox : public InputError {
 public:
  using InputError::InputError;
};

class MissingCertificate : public InputError {
 public:
  using InputError::InputError;
};

class ZeroVolumeFactor : public DomainError {
 public:
  using DomainError::DomainError;
};

class ParseError : public InputError {
 public:
  ParseError(int line, const std::string& what)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class MissingSection : public InputError {
 public:
  explicit MissingSection(const std::string& section)
      : InputError("missing section [" + section + "]"), section_(section) {}
  const std::string& section() const noexcept { return section_; }

 private:
  std::string section_;
};

class BadInterval : public InputError {
 public:
  using InputError::InputError;
};

}  // namespace acp
