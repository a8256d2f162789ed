#pragma once

#include <stdexcept>
#include <string>

namespace qdiv {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& message) : std::runtime_error(message) {}
};

class NotHermitianError : public Error {
public:
    using Error::Error;
};

class NoConvergenceError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class NotPositiveError : public Error {
public:
    using Error::Error;
};

class TraceNotOneError : public Error {
public:
    using Error::Error;
};

class OutOfRangeError : public Error {
public:
    using Error::Error;
};

class DimensionMismatchError : public Error {
public:
    using Error::Error;
};

class ZeroPointError : public Error {
public:
    using Error::Error;
};

class NotPureError : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

}  // namespace qdiv
