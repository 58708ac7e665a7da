#pragma once

#include <stdexcept>
#include <string>

namespace scma {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid sizes or out-of-range arguments.
class ParameterError : public Error {
public:
    using Error::Error;
};

// An operation defined for distinct objects received the same object twice.
class IdentityError : public Error {
public:
    using Error::Error;
};

// A search finished without a feasible candidate.
class NotFoundError : public Error {
public:
    using Error::Error;
};

// Exhaustive enumeration would exceed the supported problem size.
class CapacityError : public Error {
public:
    using Error::Error;
};

// Detector preconditions (channel kind, constellation structure) not met.
class ModeError : public Error {
public:
    using Error::Error;
};

}  // namespace scma
