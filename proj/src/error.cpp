#include "spikepca/error.hpp"

namespace spikepca {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NonFinite: return "NonFinite";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::SpecTooLarge: return "SpecTooLarge";
        case ErrorKind::NotMonotone: return "NotMonotone";
        case ErrorKind::ZeroDivision: return "ZeroDivision";
        case ErrorKind::NotUnit: return "NotUnit";
        case ErrorKind::EmptyIndexSet: return "EmptyIndexSet";
        case ErrorKind::DomainError: return "DomainError";
        case ErrorKind::MissingScores: return "MissingScores";
        case ErrorKind::BoundaryCase: return "BoundaryCase";
        case ErrorKind::UnsupportedSpec: return "UnsupportedSpec";
        case ErrorKind::InsufficientPoints: return "InsufficientPoints";
        case ErrorKind::NonPositiveResponse: return "NonPositiveResponse";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::ValidationError: return "ValidationError";
        case ErrorKind::IoError: return "IoError";
        case ErrorKind::TrialFailure: return "TrialFailure";
    }
    return "Unknown";
}

bool Error::is_validation() const noexcept {
    switch (kind_) {
        case ErrorKind::DimensionMismatch:
        case ErrorKind::SpecTooLarge:
        case ErrorKind::NotMonotone:
        case ErrorKind::UnsupportedSpec:
        case ErrorKind::ParseError:
        case ErrorKind::ValidationError:
        case ErrorKind::IoError:
        case ErrorKind::DomainError:
        case ErrorKind::BoundaryCase:
        case ErrorKind::InsufficientPoints:
            return true;
        default:
            return false;
    }
}

}  // namespace spikepca
