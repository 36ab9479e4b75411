#pragma once

#include <stdexcept>
#include <string>

namespace mdlab {

// Enumeration or scan exceeded its configured work budget.
class BudgetError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Value outside the representable exponent range.
class RangeError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Precondition violated by the caller.
class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace mdlab
