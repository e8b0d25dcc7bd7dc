#pragma once

#include <stdexcept>
#include <string>

namespace catassoc {

// Malformed input text: ragged records, bad headers, unparsable masses.
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Well-formed data that violates a precondition of the requested
// computation (degenerate table, constant response, overlapping variables).
class DataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace catassoc
