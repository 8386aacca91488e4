#pragma once

#include <stdexcept>
#include <string>

namespace steerwork {

// Operand shapes do not agree (partial trace split, POVM vs state, table
// sizes).
class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A matrix that must be Hermitian (or PSD, or trace-one) is not, within the
// tolerance of the check that raised it.
class InvalidOperator : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Requested (d, n) has no MUB construction in this library.
class UnsupportedConstruction : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A quantity is undefined for the given parameters, e.g. the advantage ratio
// when the classical bound is not positive.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace steerwork
