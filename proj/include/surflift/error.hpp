#pragma once

#include <stdexcept>
#include <string>

namespace surflift {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input or a violated precondition. The CLI maps this to exit code 1.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// The engine reached a state the theory rules out (e.g. a nonzero adjusted
// obstruction). Always a bug or a counterexample; never silently ignored.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

// Exhaustive enumeration would exceed its configured bound.
class InconclusiveError : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace surflift
