#pragma once

#include <stdexcept>
#include <string>

namespace ellhomog {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller supplied an invalid argument (shape, mode, field, index).
class UsageError : public Error {
 public:
  using Error::Error;
};

// A configured resource bound was hit: tower depth, query window, group size.
class BoundExceeded : public Error {
 public:
  using Error::Error;
};

// A constructed object violated an invariant that the mathematics guarantees.
// Any occurrence is a finding, never an expected path.
class VerificationFailed : public Error {
 public:
  using Error::Error;
};

class NotNilpotent : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

}  // namespace ellhomog
