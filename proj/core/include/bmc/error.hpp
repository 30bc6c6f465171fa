#pragma once

#include <stdexcept>
#include <string>

namespace bmc {

// Precondition violated by caller-supplied geometry or parameters.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Analytic formula exists only for discs.
class UnsupportedDomain : public DomainError {
public:
    using DomainError::DomainError;
};

// Radius or scale below the lattice resolution floor (2h).
class SubResolution : public DomainError {
public:
    using DomainError::DomainError;
};

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace bmc
