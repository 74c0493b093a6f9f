#pragma once

#include <stdexcept>
#include <string>

namespace gasflow {

enum class ErrorCode {
    MalformedInput,
    SchemaViolation,
    InconsistentBoundary,
    InvalidArgument,
    OverflowingCoefficient,
    NonPositivePotential,
    NoPipes,
    SingularJacobian,
    NotATree,
    MultipleSlacks,
    Io,
};

const char* to_string(ErrorCode code) noexcept;

/// Exception type thrown by every fallible operation in the core library.
/// The C API maps `code()` onto its status enum.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace gasflow
