#pragma once

#include <stdexcept>
#include <string>

namespace updraft {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file or field.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Input parsed but violates a domain invariant (concave footprint, bad heights, ...).
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace updraft
