#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace spikepca {

enum class ErrorKind {
    NonFinite,
    NoConvergence,
    DimensionMismatch,
    SpecTooLarge,
    NotMonotone,
    ZeroDivision,
    NotUnit,
    EmptyIndexSet,
    DomainError,
    MissingScores,
    BoundaryCase,
    UnsupportedSpec,
    InsufficientPoints,
    NonPositiveResponse,
    ParseError,
    ValidationError,
    IoError,
    TrialFailure,
};

std::string_view to_string(ErrorKind kind);

/// Library-wide exception. Every failure mode the public API documents is
/// reported through this type; `kind()` tells callers which one.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    /// True for failures caused by bad input or configuration rather than
    /// by the numerics (drives the CLI exit code).
    bool is_validation() const noexcept;

private:
    ErrorKind kind_;
};

}  // namespace spikepca
