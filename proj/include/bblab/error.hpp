#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bblab {

// Base class for all library failures.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed textual input (formula, machine file, tag, DIMACS, bit string).
// `position` is a byte offset into the offending text when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t position = npos)
      : Error(msg), position(position) {}

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t position;
};

// A configured resource budget ran out (solver conflicts, simulation
// configurations, tableau steps).  Never signals a wrong answer.
class BudgetError : public Error {
 public:
  using Error::Error;
};

// Exhaustive enumeration refused: the formula exceeds the variable limit.
class LimitError : public Error {
 public:
  using Error::Error;
};

// A precondition on values was violated (unbound variable, domain mismatch,
// wrong gadget family, invalid parameter).
class DomainError : public Error {
 public:
  using Error::Error;
};

// The queried variable set is not a backbone of the formula.
class NotABackboneError : public Error {
 public:
  using Error::Error;
};

// A value oracle returned an answer that is neither all-true nor all-false.
class InconsistentOracleError : public Error {
 public:
  using Error::Error;
};

// A machine pair used as an experiment fixture is not complementary on the
// requested input.
class FixtureError : public Error {
 public:
  using Error::Error;
};

}  // namespace bblab
