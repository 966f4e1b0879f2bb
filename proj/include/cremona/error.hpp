#pragma once

#include <stdexcept>
#include <string>

namespace cremona {

enum class ErrorKind {
    DegreeMismatch,
    CommonFactor,
    NotBirational,
    BudgetExceeded,
    SyntaxError,
    UnboundParameter,
    NonHomogeneous,
    IrrationalBasePoint,
    InfinitelyNearSuspected,
    NoetherViolation,
    UnassignedFactor,
    MissingFactor,
    HitsInverseFPoint,
    InsufficientData,
    SingularSystem,
    Internal,
};

inline const char* error_kind_name(ErrorKind k)
{
    switch (k) {
    case ErrorKind::DegreeMismatch: return "DegreeMismatch";
    case ErrorKind::CommonFactor: return "CommonFactor";
    case ErrorKind::NotBirational: return "NotBirational";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnboundParameter: return "UnboundParameter";
    case ErrorKind::NonHomogeneous: return "NonHomogeneous";
    case ErrorKind::IrrationalBasePoint: return "IrrationalBasePoint";
    case ErrorKind::InfinitelyNearSuspected: return "InfinitelyNearSuspected";
    case ErrorKind::NoetherViolation: return "NoetherViolation";
    case ErrorKind::UnassignedFactor: return "UnassignedFactor";
    case ErrorKind::MissingFactor: return "MissingFactor";
    case ErrorKind::HitsInverseFPoint: return "HitsInverseFPoint";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::Internal: return "Internal";
    }
    return "Unknown";
}

/// Library-wide exception. `detail` carries machine-readable context
/// (e.g. the residual factor of a failed root search).
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg, std::string detail = {})
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + msg),
          kind_(kind), detail_(std::move(detail))
    {
    }

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorKind kind_;
    std::string detail_;
};

} // namespace cremona
