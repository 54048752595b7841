#pragma once

#include <stdexcept>
#include <string>

namespace kakeyalab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotOddPrimePower : public Error {
 public:
  explicit NotOddPrimePower(long long q)
      : Error("q = " + std::to_string(q) + " is not an odd prime power"), q_(q) {}
  long long q() const noexcept { return q_; }

 private:
  long long q_;
};

class DivisionByZero : public Error {
 public:
  DivisionByZero() : Error("division by zero in finite field") {}
};

class MixedFields : public Error {
 public:
  MixedFields() : Error("operands belong to different fields") {}
};

class IdenticalPoints : public Error {
 public:
  IdenticalPoints() : Error("slope between identical points is undefined") {}
};

class PointNotInSet : public Error {
 public:
  explicit PointNotInSet(const std::string& what = "point is not in the set") : Error(what) {}
};

class PreconditionViolated : public Error {
 public:
  using Error::Error;
};

class WrongKind : public Error {
 public:
  using Error::Error;
};

class MissingSlope : public Error {
 public:
  using Error::Error;
};

/// Dualization produced a function that is neither a permutation nor a
/// semipermutation. Cannot happen for a cover with R <= 1.
class DegenerateDual : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace kakeyalab
