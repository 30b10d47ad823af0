#pragma once

#include <stdexcept>

namespace bai {

/// Base for every error caused by bad input. The CLI maps these to exit code 1.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A precondition of an operation was violated (index out of range, bad parameters).
class ContractError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Argument outside the mathematical domain of a function (e.g. KL at p = 0).
class DomainError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Budget too small for the requested strategy or schedule.
class BudgetError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// A complexity functional is undefined (no suboptimal arm) or ambiguous (tied optimum).
class ComplexityError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// The exhaustive enumeration verifier was asked for more than it can enumerate.
class EnumerationLimitError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Output could not be written. The CLI maps this to exit code 2.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace bai
