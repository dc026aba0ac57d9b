#pragma once

#include <stdexcept>
#include <string>

namespace qbayes {

/// Raised when an input violates a documented precondition or invariant.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a computation cannot proceed (singular systems,
/// impossible outcomes, non-finite integrands).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace qbayes
