#pragma once

#include <stdexcept>
#include <string>

namespace qnlchain {

// Argument outside the mathematical domain of a function (e.g. r <= 0 for a
// pair potential, a turning angle of +-pi for the bond-angle energy).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed or out-of-range caller input.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Degenerate chain geometry, e.g. coincident neighbouring atoms.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An operation was called on input that violates its stated precondition
// (e.g. asking for a closed-form Hessian on a non-uniform chain).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class NotPositiveDefiniteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoRootError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The second variation is not positive definite where a solve requires it.
class StabilityError : public std::runtime_error {
 public:
  StabilityError(const std::string& what, double numeric_inf)
      : std::runtime_error(what), numeric_inf_(numeric_inf) {}
  double numeric_inf() const noexcept { return numeric_inf_; }

 private:
  double numeric_inf_;
};

}  // namespace qnlchain
