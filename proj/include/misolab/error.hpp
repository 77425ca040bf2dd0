#pragma once

#include <stdexcept>
#include <string>

namespace misolab {

enum class ErrorKind {
    InvalidDimension,
    Domain,
    InvalidInput,
    BlockExhausted,
    InvalidState,
    NumericalFailure,
    DegenerateConfiguration,
    ZeroEstimate,
};

const char* to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; `kind()` tells callers which
/// contract was broken.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::InvalidDimension: return "invalid-dimension";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::BlockExhausted: return "block-exhausted";
    case ErrorKind::InvalidState: return "invalid-state";
    case ErrorKind::NumericalFailure: return "numerical-failure";
    case ErrorKind::DegenerateConfiguration: return "degenerate-configuration";
    case ErrorKind::ZeroEstimate: return "zero-estimate";
    }
    return "unknown";
}

}  // namespace misolab
