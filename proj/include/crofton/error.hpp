#pragma once

#include <stdexcept>
#include <string>

namespace crofton {

// Bad caller input: invalid domains, out-of-range arguments, malformed specs.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numeric procedure could not produce a result (non-finite field values,
// exhausted budgets, degenerate geometry).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file. `where` is a line number or byte offset, as described
// in the message.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace crofton
