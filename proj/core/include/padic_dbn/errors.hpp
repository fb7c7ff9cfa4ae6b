#pragma once

#include <stdexcept>
#include <string>

namespace padic_dbn {

// Invalid input: bad prime, out-of-range element, mismatched widths, malformed files.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An enumeration would exceed the configured cap.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The target already equals the model marginal, so there is nothing to improve.
class AlreadyMatched : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace padic_dbn
