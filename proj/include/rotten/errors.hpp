#pragma once

#include <stdexcept>
#include <string>

namespace rotten {

/// Raised when an axis or state vector does not have the required norm.
class NormalizationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a tailoring offset has no real phase solution (|f| > sqrt(3)).
class OffsetOutOfRange : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised for an argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised when a spectral phase is requested at a bin with zero magnitude.
class UndefinedPhase : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input documents (sequence files, spin-system configs).
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace rotten
