#ifndef RANKFORGE_ERROR_HPP
#define RANKFORGE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace rankforge {

// Base class for all recoverable input/usage errors (CLI exit code 1).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file contents.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Inputs that parse but violate an operation's contract.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Broken internal invariant (CLI exit code 2).
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace rankforge

#endif  // RANKFORGE_ERROR_HPP
