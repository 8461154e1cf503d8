#pragma once

#include <stdexcept>
#include <string>

namespace lemlab {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NonConvergence : public Error {
public:
    using Error::Error;
};

class NotMonic : public Error {
public:
    NotMonic() : Error("polynomial is not monic") {}
    using Error::Error;
};

class BudgetTooSmall : public Error {
public:
    using Error::Error;
};

class ResolutionTooCoarse : public Error {
public:
    using Error::Error;
};

class EmptyRegion : public Error {
public:
    using Error::Error;
};

class DegenerateBoundary : public Error {
public:
    using Error::Error;
};

// B has no interior cell at the requested grid spacing.
class ThinPlate : public Error {
public:
    using Error::Error;
};

class SolveFailure : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Malformed text input. `field()` names the offending key or token.
class ParseError : public Error {
public:
    ParseError(std::string field, const std::string& what)
        : Error("parse error in '" + field + "': " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace lemlab
