#pragma once

#include <stdexcept>
#include <string>

namespace askey {

// Argument outside the lattice or outside a family's parameter range.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A (family, convolution type) pair that has no reversible kernel.
class UnsupportedCombination : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Caller broke a precondition that is not a plain range check
// (non-terminating series, non-symmetric input to a symmetric solver).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// A denominator parameter reached zero before the series terminated.
class SingularityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Brute-force many-body routines refuse lattices above their cap.
class SizeCapExceeded : public std::length_error {
public:
    using std::length_error::length_error;
};

}  // namespace askey
