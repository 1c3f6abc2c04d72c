#pragma once

#include <stdexcept>
#include <string>

namespace eqpart {

/// Input that cannot be interpreted as an instance (bad token, empty input,
/// integer overflow while parsing or transforming).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A well-formed request that violates a problem constraint: odd N for
/// equal-cardinality solving, cardinality out of range, oracle size cap.
class ConstraintError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A broken solver invariant. Never caused by user input in exact mode.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// The traverse guard tripped.
class NonTerminationError : public InternalError {
public:
    using InternalError::InternalError;
};

} // namespace eqpart
