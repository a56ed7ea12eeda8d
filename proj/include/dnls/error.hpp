#pragma once

#include <stdexcept>
#include <string>

namespace dnls {

/// Category of a toolkit failure. Callers that need to branch on the cause
/// (for example the pipeline, which annotates errors with the stage that
/// raised them) switch on this instead of parsing messages.
enum class ErrorKind {
    InvalidArgument,
    GridMismatch,
    NonFinite,
    Overflow,
    NoConvergence,
    NoEigenvalue,
    OutsideValidity,
    Degenerate,
    Solvability,
    FitResidual,
    ZeroCoefficient,
    IllConditioned,
    Contraction,
    ResidualCheck,
    BoundaryDrift,
    RoundTrip,
    ConservationDrift,
    Io,
    Config,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Raised by the stability pipeline; wraps a sub-module error with the stage
/// name ("eigenvalue", "bt_down", "jost_evolve", ...).
class PipelineError : public Error {
public:
    PipelineError(std::string stage, const Error& cause)
        : Error(cause.kind(), stage + ": " + cause.what()), stage_(std::move(stage)) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

}  // namespace dnls
